use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent vector of a monomial in variables indexed from 0.
///
/// Trailing zero exponents are never stored, so monomials over different
/// numbers of variables compare consistently. The derived order compares the
/// total degree first and then the exponents lexicographically, which is the
/// graded lexicographic order with `x_0 > x_1 > ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Monomial {
    degree: u32,
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        Monomial::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        let mut exps: SmallVec<[u16; 8]> = SmallVec::from_elem(0, i + 1);
        exps[i] = e;
        Monomial::from_exps(exps)
    }

    pub fn from_exps<I: IntoIterator<Item = u16>>(exps: I) -> Self {
        let mut exps: SmallVec<[u16; 8]> = exps.into_iter().collect();
        while exps.last() == Some(&0) {
            exps.pop();
        }
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { degree, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    /// One past the largest variable index with a nonzero exponent.
    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Indices of variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let mut exps: SmallVec<[u16; 8]> = SmallVec::with_capacity(n);
        for i in 0..n {
            exps.push(self.exp(i) + other.exp(i));
        }
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() <= other.exps.len()
            && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn div(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        Some(Monomial::from_exps(
            (0..self.exps.len()).map(|i| self.exp(i) - divisor.exp(i)),
        ))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().min(other.exps.len());
        Monomial::from_exps((0..n).map(|i| self.exp(i).min(other.exp(i))))
    }

    pub fn pow(&self, e: u16) -> Monomial {
        Monomial::from_exps(self.exps.iter().map(|&x| x * e))
    }

    /// Same monomial with the exponent of variable `v` set to zero.
    pub fn without(&self, v: usize) -> Monomial {
        if self.exp(v) == 0 {
            return self.clone();
        }
        Monomial::from_exps((0..self.exps.len()).map(|i| if i == v { 0 } else { self.exp(i) }))
    }

    pub fn with_exp(&self, v: usize, e: u16) -> Monomial {
        let n = self.exps.len().max(v + 1);
        Monomial::from_exps((0..n).map(|i| if i == v { e } else { self.exp(i) }))
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", names(i))?;
            } else {
                write!(f, "{}^{}", names(i), e)?;
            }
        }
        Ok(())
    }
}

pub fn default_var_name(i: usize) -> String {
    format!("t{}", i + 1)
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_var_name)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_var_name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x0 = Monomial::var(0);
        let x1 = Monomial::var(1);
        let x0x1 = x0.mul(&x1);
        let x1sq = x1.pow(2);
        assert!(x0 > x1);
        assert!(x0x1 > x1sq);
        assert!(x1sq > x0);
        assert!(Monomial::one() < x1);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let a = Monomial::from_exps([1, 0, 0]);
        assert_eq!(a, Monomial::var(0));
        assert_eq!(a.len(), 1);
        let b = Monomial::var_pow(2, 3).div(&Monomial::var_pow(2, 3)).unwrap();
        assert!(b.is_one());
    }

    #[test]
    fn divisibility() {
        let a = Monomial::from_exps([2, 1]);
        let b = Monomial::from_exps([1, 1]);
        assert!(b.divides(&a));
        assert_eq!(a.div(&b), Some(Monomial::var(0)));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.gcd(&Monomial::from_exps([0, 3, 1])), Monomial::var(1));
    }
}
