//! Scalar traits shared by every algebraic layer.
//!
//! Everything above this module (linear algebra, face rings, degree maps) is
//! written against [`Field`], so the same code runs over a rational function
//! field `K(t_1, ..., t_n)` for exact results and over a plain finite or
//! rational field when the moment-curve parameters have been specialized to
//! numbers.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// 0 for characteristic zero.
    fn characteristic() -> u64;

    /// Multiplicative inverse; `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self.clone() * inv)
    }

    /// Rough size of the element, used to pick light pivots during elimination.
    fn pivot_weight(&self) -> usize {
        1
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Integer power; `None` when a negative power of zero is requested.
    fn powi(&self, exp: i64) -> Option<Self> {
        if exp >= 0 {
            Some(self.pow(exp as u64))
        } else {
            self.inverse().map(|inv| inv.pow(exp.unsigned_abs()))
        }
    }

    /// Evaluates `sum_t coeff_t * prod_f f^e` for a list of factored terms.
    ///
    /// Returns `None` when a factor carrying a negative exponent is zero.
    /// Rational functions override this to share a common denominator instead
    /// of normalizing after every addition.
    fn sum_factored(terms: &[FactoredTerm<Self>]) -> Option<Self> {
        let mut total = Self::zero();
        for term in terms {
            let mut value = term.coeff.clone();
            for (factor, exp) in &term.factors {
                value = value * factor.powi(*exp as i64)?;
            }
            total = total + value;
        }
        Some(total)
    }
}

/// One summand of [`Field::sum_factored`].
#[derive(Clone, Debug)]
pub struct FactoredTerm<F> {
    pub coeff: F,
    pub factors: Vec<(F, i32)>,
}

/// A field that receives a canonical embedding of the base field `C`.
pub trait ScalarOver<C>: Field {
    fn from_base(c: &C) -> Self;
}

/// Runtime description of a base field: a prime field or the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldKind {
    Prime(u64),
    Rationals,
}

impl FieldKind {
    /// A prime field; fails unless `p` is prime.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldKind::Prime(p))
        } else {
            Err(Error::Config(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Prime(p) => *p,
            FieldKind::Rationals => 0,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") || s == "0" {
            return Ok(FieldKind::Rationals);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::Config(format!("unrecognized field '{s}'")))?;
        FieldKind::prime(p)
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Prime(p) => write!(f, "F_{p}"),
            FieldKind::Rationals => write!(f, "Q"),
        }
    }
}

/// A prime field or the rationals: the coefficient field of polynomials.
pub trait BaseField:
    Field + Eq + Hash + Display + Serialize + DeserializeOwned + ScalarOver<Self>
{
    /// Field used for randomized rank certification (a large extension of
    /// `F_p`, or `Q` itself).
    type Eval: ScalarOver<Self> + Display;
    /// Field used internally to probe polynomial coprimality.
    type Probe: Field;

    fn kind() -> FieldKind;

    fn from_i64(v: i64) -> Self;

    /// Random nonzero element of the evaluation field, from a window of at
    /// least 2^20 elements.
    fn random_eval<R: Rng + ?Sized>(rng: &mut R) -> Self::Eval;

    /// Small random element of the base field (used when sampling
    /// coefficients).
    fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn random_probe<R: Rng + ?Sized>(rng: &mut R) -> Self::Probe;

    /// Image in the probe field, if defined.
    fn to_probe(&self) -> Option<Self::Probe>;

    /// Scalar `s` such that `s * poly` is in canonical form, given the
    /// polynomial's coefficients with the leading one first.
    fn canonical_scale(coeffs: &[&Self]) -> Self;

    /// p-th root of a base-field element in characteristic p.
    fn pth_root(&self) -> Self;
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let small = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let mut i = 0;
    while i < small.len() {
        if n == small[i] {
            return true;
        }
        if n % small[i] == 0 {
            return false;
        }
        i += 1;
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mut i = 0;
    while i < small.len() {
        let a = small[i];
        let mut x = pow_mod(a, d, n);
        if x != 1 && x != n - 1 {
            let mut r = 1;
            let mut witness = true;
            while r < s {
                x = mul_mod(x, x, n);
                if x == n - 1 {
                    witness = false;
                    break;
                }
                r += 1;
            }
            if witness {
                return false;
            }
        }
        i += 1;
    }
    true
}

pub(crate) const fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) const fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn field_kind_parse() {
        assert_eq!(FieldKind::parse("Q").unwrap(), FieldKind::Rationals);
        assert_eq!(FieldKind::parse("7").unwrap(), FieldKind::Prime(7));
        assert!(FieldKind::parse("9").is_err());
    }
}
