//! Truncated jets `E[ε_1, ..., ε_m] / (ε_i^2)` for exact mixed partial
//! derivatives at a point.

use crate::scalars::Field;

/// A multilinear polynomial in nilpotent generators; coefficient `i` belongs
/// to the product of the generators in the bitmask `i`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Jet<E> {
    coeffs: Vec<E>,
}

impl<E: Field> Jet<E> {
    pub fn constant(m: usize, c: E) -> Self {
        let mut coeffs = vec![E::zero(); 1 << m];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// `c + ε_g`.
    pub fn variable(m: usize, c: E, g: usize) -> Self {
        let mut j = Self::constant(m, c);
        j.coeffs[1 << g] = E::one();
        j
    }

    #[cfg(test)]
    pub fn constant_term(&self) -> &E {
        &self.coeffs[0]
    }

    /// Coefficient of `ε_1 ⋯ ε_m`: the mixed partial derivative.
    pub fn top(&self) -> &E {
        self.coeffs.last().expect("nonempty")
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Jet { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Jet { coeffs }
    }

    pub fn scale(&self, c: &E) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.coeffs.len();
        let mut coeffs = vec![E::zero(); len];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let free = (len - 1) & !a;
            // iterate the submasks of the complement of `a`
            let mut b = free;
            loop {
                let y = &other.coeffs[b];
                if !y.is_zero() {
                    coeffs[a | b] = coeffs[a | b].clone() + x.clone() * y.clone();
                }
                if b == 0 {
                    break;
                }
                b = (b - 1) & free;
            }
        }
        Jet { coeffs }
    }

    /// `None` when the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c_inv = self.coeffs[0].inverse()?;
        let m = self.coeffs.len().trailing_zeros() as usize;
        // (c + n)^{-1} = c^{-1} Σ_{i <= m} (-n/c)^i since n^{m+1} = 0
        let mut q = self.scale(&-c_inv.clone());
        q.coeffs[0] = E::zero();
        let mut acc = Self::constant(m, E::one());
        let mut term = acc.clone();
        for _ in 0..m {
            term = term.mul(&q);
            acc = acc.add(&term);
        }
        Some(acc.scale(&c_inv))
    }

    pub fn powi(&self, exp: i32) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let m = self.coeffs.len().trailing_zeros() as usize;
        let mut acc = Self::constant(m, E::one());
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
}
