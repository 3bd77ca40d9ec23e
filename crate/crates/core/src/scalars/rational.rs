use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::field::{BaseField, Field, FieldKind, ScalarOver};
use super::fp::{Fp, M61};

/// Exact rationals with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Width of the window random evaluation points are drawn from.
pub const EVAL_WINDOW: i64 = 1 << 20;

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn pivot_weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl ScalarOver<BigRational> for BigRational {
    fn from_base(c: &BigRational) -> Self {
        c.clone()
    }
}

impl BaseField for BigRational {
    type Eval = BigRational;
    type Probe = Fp<M61>;

    fn kind() -> FieldKind {
        FieldKind::Rationals
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn random_eval<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
        BigRational::from_integer(BigInt::from(rng.gen_range(1..=EVAL_WINDOW)))
    }

    fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Self {
        BigRational::from_integer(BigInt::from(rng.gen_range(-9i64..=9)))
    }

    fn random_probe<R: Rng + ?Sized>(rng: &mut R) -> Fp<M61> {
        Fp::new(rng.gen_range(0..M61))
    }

    fn to_probe(&self) -> Option<Fp<M61>> {
        let num = reduce_mod(self.numer(), M61);
        let den = reduce_mod(self.denom(), M61);
        Fp::<M61>::new(den).inverse().map(|inv| Fp::new(num) * inv)
    }

    fn canonical_scale(coeffs: &[&Self]) -> Self {
        let Some(lead) = coeffs.first() else {
            return BigRational::one();
        };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in coeffs {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            return BigRational::one();
        }
        let content = BigRational::new(num_gcd, den_lcm);
        let scale = content.recip();
        if lead.is_negative() {
            -scale
        } else {
            scale
        }
    }

    fn pth_root(&self) -> Self {
        self.clone()
    }
}

/// Nonnegative residue of a big integer modulo a machine prime.
pub fn reduce_mod(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

/// Additive p-adic valuation of a nonzero integer.
pub fn int_valuation(x: &BigInt, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// Additive p-adic valuation of a nonzero rational.
pub fn rational_valuation(x: &BigRational, p: u64) -> i64 {
    int_valuation(x.numer(), p) - int_valuation(x.denom(), p)
}

/// Residue of a p-integral rational in `F_P`; `None` if `p` divides the
/// denominator.
pub fn rational_residue<const P: u64>(x: &BigRational) -> Option<Fp<P>> {
    let den = reduce_mod(x.denom(), P);
    let inv = Fp::<P>::new(den).inverse()?;
    Some(Fp::new(reduce_mod(x.numer(), P)) * inv)
}

pub fn is_integral(x: &BigRational) -> bool {
    x.denom().sign() == Sign::Plus && x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        assert_eq!(rational_valuation(&q(12, 5), 2), 2);
        assert_eq!(rational_valuation(&q(1, 5), 5), -1);
        assert_eq!(rational_valuation(&q(7, 3), 5), 0);
    }

    #[test]
    fn residues() {
        assert_eq!(rational_residue::<5>(&q(3, 2)), Some(Fp::new(4)));
        assert_eq!(rational_residue::<2>(&q(1, 2)), None);
        assert_eq!(rational_residue::<3>(&q(-1, 1)), Some(Fp::new(2)));
    }

    #[test]
    fn canonical_scale_makes_primitive_positive() {
        let coeffs = [q(-2, 3), q(4, 9)];
        let refs: Vec<&BigRational> = coeffs.iter().collect();
        let s = BigRational::canonical_scale(&refs);
        let scaled: Vec<BigRational> = coeffs.iter().map(|c| c * &s).collect();
        assert_eq!(scaled, vec![q(3, 1), q(-2, 1)]);
    }
}
