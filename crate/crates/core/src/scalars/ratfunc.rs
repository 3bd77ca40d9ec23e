use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{BaseField, FactoredTerm, Field, ScalarOver};
use super::fp::Fp;
use super::gcd::gcd;
use super::monomial::default_var_name;
use super::polynomial::Polynomial;
use super::rational::{int_valuation, rational_residue, Rational};
use crate::error::{Error, Result};

/// Element of `K(t_1, ..., t_n)`, always stored in canonical form: numerator
/// and denominator coprime, denominator monic over `F_p` and primitive with
/// positive leading coefficient over `Q`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: serde::de::DeserializeOwned"))]
pub struct RationalFunction<C> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: BaseField> RationalFunction<C> {
    /// Canonical representative of `num / den`.
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::MalformedScalar("zero denominator".into()));
        }
        Ok(Self::normalize_parts(num, den))
    }

    fn normalize_parts(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let inv = den.constant_value().unwrap().inverse().expect("nonzero denominator");
            return RationalFunction {
                num: num.scale(&inv),
                den: Polynomial::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        Self::with_canonical_den(num, den)
    }

    /// Rescales so the denominator is canonical; assumes the parts are coprime.
    fn with_canonical_den(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        let (den, s) = den.canonical();
        let num = if s.is_one() { num } else { num.scale(&s) };
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn from_i64(v: i64) -> Self {
        Self::constant(C::from_i64(v))
    }

    /// The variable with index `i` (`t_{i+1}` in one-based notation).
    pub fn var(i: usize) -> Self {
        Self::from_polynomial(Polynomial::var(i))
    }

    pub fn from_polynomial(p: Polynomial<C>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<C> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num.num_vars().max(self.den.num_vars())
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.num.mentions(v) || self.den.mentions(v)
    }

    /// Total number of stored terms, a proxy for the cost of arithmetic.
    pub fn size(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Substitution homomorphism `t_i -> point[i]`.
    pub fn evaluate<E: ScalarOver<C>>(&self, point: &[E]) -> Result<E> {
        if point.len() < self.num_vars() {
            return Err(Error::Dimension(format!(
                "evaluation point has {} coordinates, function uses {}",
                point.len(),
                self.num_vars()
            )));
        }
        let d = self.den.evaluate(point);
        let inv = d.inverse().ok_or(Error::EvaluationPole)?;
        Ok(self.num.evaluate(point) * inv)
    }

    /// Substitutes rational functions for the first `images.len()` variables.
    pub fn substitute(&self, images: &[RationalFunction<C>]) -> Result<Self> {
        let eval = |p: &Polynomial<C>| -> Self {
            let mut total = Self::zero();
            for (m, c) in p.terms() {
                let mut term = Self::constant(c.clone());
                for (v, &e) in m.exps().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let base = if v < images.len() { images[v].clone() } else { Self::var(v) };
                    term = term * Field::pow(&base, e as u64);
                }
                total = total + term;
            }
            total
        };
        let n = eval(&self.num);
        let d = eval(&self.den);
        n.checked_div(&d).ok_or(Error::EvaluationPole)
    }

    /// Quotient-rule derivative with respect to the variable of index `v`.
    pub fn partial_derivative(&self, v: usize) -> Self {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::normalize_parts(dn, self.den.clone());
        }
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        Self::normalize_parts(top, &self.den * &self.den)
    }

    /// Decides whether `self` is a p-th power in `K(t)` for `p` the
    /// characteristic, returning a root `h` with `h^p = self` when it is.
    ///
    /// The decision is made by the vanishing of all partial derivatives; the
    /// root is read off the canonical form by replacing `t^p` with `t`.
    pub fn is_pth_power(&self, p: u64) -> Result<Option<Self>> {
        if C::characteristic() != p || p == 0 {
            return Err(Error::Config(format!(
                "p-th power test for p = {p} over a field of characteristic {}",
                C::characteristic()
            )));
        }
        if self.is_zero() {
            return Err(Error::Domain("p-th power test of zero".into()));
        }
        let nvars = self.num_vars();
        let all_vanish = (0..nvars).all(|v| {
            let dn = self.num.derivative(v);
            let dd = self.den.derivative(v);
            (&dn * &self.den) == (&self.num * &dd)
        });
        if !all_vanish {
            return Ok(None);
        }
        let (Some(num), Some(den)) = (self.num.pth_root_substitute(p), self.den.pth_root_substitute(p))
        else {
            return Err(Error::Internal(
                "derivatives vanish but the canonical form is not a p-th power".into(),
            ));
        };
        Ok(Some(RationalFunction { num, den }))
    }

    /// Sum of `coeff * prod factor^exp` over linear-ish factors, sharing one
    /// common denominator instead of normalizing after every addition.
    fn sum_factored_impl(terms: &[FactoredTerm<Self>]) -> Option<Self> {
        // denominators are tracked as multisets of canonical polynomials
        let mut keys: Vec<Polynomial<C>> = Vec::new();
        let mut index: HashMap<Polynomial<C>, usize> = HashMap::new();
        let mut key_of = |p: &Polynomial<C>, keys: &mut Vec<Polynomial<C>>| -> usize {
            if let Some(&i) = index.get(p) {
                return i;
            }
            keys.push(p.clone());
            index.insert(p.clone(), keys.len() - 1);
            keys.len() - 1
        };
        struct Term<C> {
            num: Polynomial<C>,
            den: Vec<(usize, u32)>,
        }
        let mut prepared: Vec<Term<C>> = Vec::with_capacity(terms.len());
        for term in terms {
            if term.coeff.is_zero() {
                continue;
            }
            let mut num = term.coeff.num.clone();
            let mut scale = C::one();
            let mut den: HashMap<usize, u32> = HashMap::new();
            let mut push_den = |p: &Polynomial<C>, e: u32, scale: &mut C, keys: &mut Vec<Polynomial<C>>| {
                if p.is_one() || e == 0 {
                    return;
                }
                let (canon, s) = p.canonical();
                // p = canon / s, so 1/p^e = s^e / canon^e
                *scale = scale.clone() * Field::pow(&s, e as u64);
                if canon.is_one() {
                    return;
                }
                let k = key_of(&canon, keys);
                *den.entry(k).or_insert(0) += e;
            };
            push_den(&term.coeff.den, 1, &mut scale, &mut keys);
            for (f, e) in &term.factors {
                if *e == 0 {
                    continue;
                }
                if f.is_zero() {
                    if *e < 0 {
                        return None;
                    }
                    num = Polynomial::zero();
                    break;
                }
                let e_abs = e.unsigned_abs();
                if *e > 0 {
                    num = &num * &f.num.pow(e_abs);
                    push_den(&f.den, e_abs, &mut scale, &mut keys);
                } else {
                    num = &num * &f.den.pow(e_abs);
                    push_den(&f.num, e_abs, &mut scale, &mut keys);
                }
            }
            if num.is_zero() {
                continue;
            }
            prepared.push(Term {
                num: num.scale(&scale),
                den: den.into_iter().collect(),
            });
        }
        if prepared.is_empty() {
            return Some(Self::zero());
        }
        let mut lcm = vec![0u32; keys.len()];
        for t in &prepared {
            for &(k, e) in &t.den {
                lcm[k] = lcm[k].max(e);
            }
        }
        let mut total = Polynomial::zero();
        let mut pow_cache: HashMap<(usize, u32), Polynomial<C>> = HashMap::new();
        for t in &prepared {
            let mut missing = lcm.clone();
            for &(k, e) in &t.den {
                missing[k] -= e;
            }
            let mut value = t.num.clone();
            for (k, &e) in missing.iter().enumerate() {
                if e > 0 {
                    let factor = pow_cache.entry((k, e)).or_insert_with(|| keys[k].pow(e)).clone();
                    value = &value * &factor;
                }
            }
            total = &total + &value;
        }
        if total.is_zero() {
            return Some(Self::zero());
        }
        // cancel whole factors first, then finish with a gcd on what is left
        let mut den = Polynomial::one();
        for (k, &e) in lcm.iter().enumerate() {
            let mut remaining = e;
            while remaining > 0 {
                match total.exact_div(&keys[k]) {
                    Some(q) => {
                        total = q;
                        remaining -= 1;
                    }
                    None => break,
                }
            }
            if remaining > 0 {
                den = &den * &keys[k].pow(remaining);
            }
        }
        Some(Self::normalize_parts(total, den))
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(f, names);
        }
        let wrap = |p: &Polynomial<C>| p.num_terms() > 1 || p.leading_coeff().to_string().contains('/');
        if wrap(&self.num) {
            write!(f, "(")?;
            self.num.fmt_with(f, names)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_with(f, names)?;
        }
        write!(f, "/")?;
        if self.den.num_terms() > 1 || !self.den.terms()[0].1.is_one() && !self.den.terms()[0].0.is_one() {
            write!(f, "(")?;
            self.den.fmt_with(f, names)?;
            write!(f, ")")
        } else {
            self.den.fmt_with(f, names)
        }
    }
}

impl RationalFunction<Rational> {
    /// Additive p-adic valuation of the constant `a` in `f = a * P / Q` with
    /// `P`, `Q` integer polynomials of content one.
    pub fn ord_p(&self, p: u64) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Domain("ord_p of zero".into()));
        }
        Ok(poly_ord_p(&self.num, p) - poly_ord_p(&self.den, p))
    }

    /// Coefficientwise reduction modulo `P` of a p-integral function.
    pub fn bracket_reduce<const P: u64>(&self) -> Result<RationalFunction<Fp<P>>> {
        if self.is_zero() {
            return Ok(RationalFunction::zero());
        }
        // In canonical form the denominator is primitive, so it never vanishes
        // mod P; a negative valuation means the reduced denominator would.
        if self.ord_p(P)? < 0 {
            return Err(Error::ReductionSingular(P));
        }
        let num = reduce_polynomial::<P>(&self.num)?;
        let den = reduce_polynomial::<P>(&self.den)?;
        if den.is_zero() {
            return Err(Error::ReductionSingular(P));
        }
        Ok(RationalFunction::normalize_parts(num, den))
    }
}

/// Minimum p-adic valuation over the coefficients of a nonzero polynomial.
pub fn poly_ord_p(p: &Polynomial<Rational>, prime: u64) -> i64 {
    p.terms()
        .iter()
        .map(|(_, c)| int_valuation(c.numer(), prime) - int_valuation(c.denom(), prime))
        .min()
        .expect("nonzero polynomial")
}

/// Reduces a p-integral rational polynomial modulo `P`.
pub fn reduce_polynomial<const P: u64>(p: &Polynomial<Rational>) -> Result<Polynomial<Fp<P>>> {
    p.map_coeffs(|c| rational_residue::<P>(c).ok_or(Error::NotPIntegral(P)))
}

/// Integer lift of a prime-field polynomial with coefficients in `(-P/2, P/2]`.
pub fn lift_polynomial<const P: u64>(p: &Polynomial<Fp<P>>) -> Polynomial<Rational> {
    p.map_coeffs(|c| {
        let v = c.value() as i64;
        let centered = if v > (P / 2) as i64 { v - P as i64 } else { v };
        Ok(Rational::from_integer(BigInt::from(centered)))
    })
    .expect("lifting cannot fail")
}

impl<C: BaseField> Zero for RationalFunction<C> {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl<C: BaseField> One for RationalFunction<C> {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl<'a, C: BaseField> Add<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn add(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return RationalFunction {
                    num,
                    den: Polynomial::one(),
                };
            }
            return RationalFunction::normalize_parts(num, self.den.clone());
        }
        if self.den.is_one() {
            // a + c/d = (a d + c) / d, still coprime to d
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RationalFunction { num, den: rhs.den.clone() };
        }
        if rhs.den.is_one() {
            let num = &(&rhs.num * &self.den) + &self.num;
            return RationalFunction { num, den: self.den.clone() };
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return RationalFunction::zero();
            }
            let den = &self.den * &rhs.den;
            return RationalFunction::with_canonical_den(num, den);
        }
        let b1 = self.den.exact_div(&g).expect("gcd divides");
        let d1 = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let h = gcd(&num, &g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (num.exact_div(&h).expect("gcd divides"), g.exact_div(&h).expect("gcd divides"))
        };
        let den = &(&b1 * &d1) * &g;
        RationalFunction::with_canonical_den(num, den)
    }
}

impl<'a, C: BaseField> Neg for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a, C: BaseField> Sub<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn sub(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        self + &(-rhs)
    }
}

impl<'a, C: BaseField> Mul<&'a RationalFunction<C>> for &'a RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn mul(self, rhs: &'a RationalFunction<C>) -> RationalFunction<C> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let cancel = |p: &Polynomial<C>, g: &Polynomial<C>| {
            if g.is_one() {
                p.clone()
            } else {
                p.exact_div(g).expect("gcd divides")
            }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        RationalFunction::with_canonical_den(num, den)
    }
}

impl<C: BaseField> Add for RationalFunction<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: BaseField> Sub for RationalFunction<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: BaseField> Mul for RationalFunction<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: BaseField> Neg for RationalFunction<C> {
    type Output = Self;
    fn neg(self) -> Self {
        -&self
    }
}

impl<C: BaseField> Field for RationalFunction<C> {
    fn characteristic() -> u64 {
        C::characteristic()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RationalFunction::with_canonical_den(self.den.clone(), self.num.clone()))
    }

    fn pivot_weight(&self) -> usize {
        self.size()
    }

    fn sum_factored(terms: &[FactoredTerm<Self>]) -> Option<Self> {
        Self::sum_factored_impl(terms)
    }
}

impl<C: BaseField> ScalarOver<C> for RationalFunction<C> {
    fn from_base(c: &C) -> Self {
        if c.is_zero() {
            RationalFunction::zero()
        } else {
            RationalFunction::constant(c.clone())
        }
    }
}

impl<C: BaseField> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_var_name)
    }
}

impl<C: BaseField> fmt::Debug for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sign of the leading numerator coefficient over `Q`.
pub fn leading_sign(f: &RationalFunction<Rational>) -> i32 {
    match f.numerator().leading() {
        None => 0,
        Some((_, c)) if c.is_negative() => -1,
        Some(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type QF = RationalFunction<Rational>;
    type F2F = RationalFunction<Fp<2>>;

    fn t(i: usize) -> QF {
        QF::var(i)
    }

    fn c(n: i64) -> QF {
        QF::from_i64(n)
    }

    #[test]
    fn normalize_cancels_common_factors() {
        let x = Polynomial::<Rational>::var(0);
        let y = Polynomial::<Rational>::var(1);
        let num = &(&x * &x) - &(&y * &y);
        let den = &x - &y;
        let f = QF::new(num, den).unwrap();
        assert_eq!(f, &t(0) + &t(1));
        assert!(f.denominator().is_one());
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert!(QF::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn inverse_and_addition() {
        let f = &t(0).inverse().unwrap() + &t(1).inverse().unwrap();
        let g = (&t(0) + &t(1)) * (&t(0) * &t(1)).inverse().unwrap();
        assert_eq!(f, g);
        assert_eq!(&f - &g, QF::zero());
    }

    #[test]
    fn quotient_rule() {
        let f = t(0).inverse().unwrap();
        let expected = -(&t(0) * &t(0)).inverse().unwrap();
        assert_eq!(f.partial_derivative(0), expected);
    }

    #[test]
    fn squares_in_char_two() {
        let x = F2F::var(0);
        let y = F2F::var(1);
        let f = &(&x * &x) + &(&y * &y);
        assert_eq!(f.is_pth_power(2).unwrap(), Some(&x + &y));
        assert_eq!(x.is_pth_power(2).unwrap(), None);
    }

    #[test]
    fn ord_p_and_bracket() {
        let f = (&c(6) * &t(0)) * (&c(3) * &t(1)).inverse().unwrap();
        assert_eq!(f.ord_p(2).unwrap(), 1);
        assert_eq!(f.ord_p(3).unwrap(), 0);
        let g = &(&c(3) * &t(0)) + &(&c(4) * &t(1));
        let g = g * t(0).inverse().unwrap();
        assert_eq!(g.bracket_reduce::<2>().unwrap(), RationalFunction::one());
        let h = t(0) * (&c(2) * &t(1)).inverse().unwrap();
        assert_eq!(h.bracket_reduce::<2>(), Err(Error::ReductionSingular(2)));
    }

    #[test]
    fn sum_factored_matches_naive() {
        let a = &t(1) - &t(0);
        let b = &t(2) - &t(0);
        let terms = vec![
            FactoredTerm {
                coeff: c(1),
                factors: vec![(a.clone(), -1), (b.clone(), -1)],
            },
            FactoredTerm {
                coeff: c(-1),
                factors: vec![(a.clone(), -2), (t(0), 1)],
            },
            FactoredTerm {
                coeff: c(2),
                factors: vec![(b.clone(), -1), (a.clone(), 1)],
            },
        ];
        let fast = QF::sum_factored(&terms).unwrap();
        let mut naive = QF::zero();
        for term in &terms {
            let mut v = term.coeff.clone();
            for (f, e) in &term.factors {
                v = v * f.powi(*e as i64).unwrap();
            }
            naive = naive + v;
        }
        assert_eq!(fast, naive);
    }

    #[test]
    fn evaluation_pole() {
        let f = (&t(0) + &t(1)) * (&t(0) - &t(1)).inverse().unwrap();
        let one = Rational::one();
        assert_eq!(f.evaluate(&[one.clone(), one]), Err(Error::EvaluationPole));
    }
}
