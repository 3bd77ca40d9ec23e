use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::field::{is_prime, mul_mod, pow_mod, BaseField, Field, FieldKind, ScalarOver};
use super::gf::Gf;

/// Element of the prime field `F_P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fp<const P: u64>(u64);

/// The Mersenne prime 2^61 - 1.
pub const M61: u64 = (1 << 61) - 1;

impl<const P: u64> Fp<P> {
    const PRIME: () = assert!(is_prime(P), "modulus must be prime");

    pub fn new(value: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME;
        Fp(value % P)
    }

    pub fn from_i128(value: i128) -> Self {
        Fp::new(value.rem_euclid(P as i128) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub const MODULUS: u64 = P;
}

impl<const P: u64> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u128 + rhs.0 as u128;
        Fp((s % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(P - (rhs.0 - self.0))
        }
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(mul_mod(self.0, rhs.0, P))
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn characteristic() -> u64 {
        P
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(Fp(pow_mod(self.0, P - 2, P)))
        }
    }
}

impl<const P: u64> ScalarOver<Fp<P>> for Fp<P> {
    fn from_base(c: &Fp<P>) -> Self {
        *c
    }
}

impl<const P: u64> BaseField for Fp<P> {
    type Eval = Gf<P>;
    type Probe = Gf<P>;

    fn kind() -> FieldKind {
        FieldKind::Prime(P)
    }

    fn from_i64(v: i64) -> Self {
        Fp::from_i128(v as i128)
    }

    fn random_eval<R: Rng + ?Sized>(rng: &mut R) -> Gf<P> {
        loop {
            let g = Gf::random(rng);
            if !g.is_zero() {
                return g;
            }
        }
    }

    fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp::new(rng.gen_range(0..P))
    }

    fn random_probe<R: Rng + ?Sized>(rng: &mut R) -> Gf<P> {
        Gf::random(rng)
    }

    fn to_probe(&self) -> Option<Gf<P>> {
        Some(Gf::from_base(self))
    }

    fn canonical_scale(coeffs: &[&Self]) -> Self {
        coeffs
            .first()
            .and_then(|lc| lc.inverse())
            .unwrap_or_else(Self::one)
    }

    fn pth_root(&self) -> Self {
        // Frobenius is the identity on F_p.
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F7 = Fp<7>;

    #[test]
    fn arithmetic_mod_seven() {
        let a = F7::new(5);
        let b = F7::new(4);
        assert_eq!(a + b, F7::new(2));
        assert_eq!(a - b, F7::new(1));
        assert_eq!(b - a, F7::new(6));
        assert_eq!(a * b, F7::new(6));
        assert_eq!(-a, F7::new(2));
        assert_eq!(a * a.inverse().unwrap(), F7::one());
        assert_eq!(F7::zero().inverse(), None);
        assert_eq!(F7::from_i64(-1), F7::new(6));
    }

    #[test]
    fn large_modulus() {
        type Big = Fp<M61>;
        let a = Big::new(M61 - 1);
        assert_eq!(a * a, Big::one());
        assert_eq!(a.inverse().unwrap(), a);
    }
}
