use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::field::{BaseField, ScalarOver};
use super::monomial::{default_var_name, Monomial};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with terms kept in decreasing graded
/// lexicographic order and no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: serde::de::DeserializeOwned"))]
pub struct Polynomial<C> {
    terms: Vec<(Monomial, C)>,
}

impl<C: BaseField> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, C> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> C {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// One past the largest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.iter().map(|(m, _)| m.len()).max().unwrap_or(0)
    }

    /// Flags of the variables that occur.
    pub fn vars(&self) -> Vec<bool> {
        let mut used = vec![false; self.num_vars()];
        for (m, _) in &self.terms {
            for v in m.support() {
                used[v] = true;
            }
        }
        used
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        // multiplying by a monomial preserves the order
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.mul(mono), x.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dm, dc) = divisor.leading().expect("nonzero divisor");
        let dc_inv = dc.inverse().expect("nonzero leading coefficient");
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let q = m.div(dm)?;
                terms.push((q, c.clone() * dc_inv.clone()));
            }
            return Some(Polynomial { terms });
        }
        if !dm.divides(&self.terms[0].0) {
            return None;
        }
        // per-variable degree bound rules out many non-divisible cases cheaply
        for v in 0..divisor.num_vars() {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        let mut rem: BTreeMap<Monomial, C> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(dm)?;
            let qc = c * dc_inv.clone();
            for (tm, tc) in divisor.terms.iter().skip(1) {
                let key = tm.mul(&qm);
                let delta = qc.clone() * tc.clone();
                match rem.get_mut(&key) {
                    Some(slot) => {
                        let updated = slot.clone() - delta;
                        if updated.is_zero() {
                            rem.remove(&key);
                        } else {
                            *slot = updated;
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(Polynomial { terms: quotient })
    }

    /// Greatest common divisor of all monomials that occur.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, mono: &Monomial) -> Self {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div(mono).expect("monomial divides every term"), c.clone()))
                .collect(),
        }
    }

    /// Scales to canonical form (monic over `F_p`, primitive with positive
    /// leading coefficient over `Q`); returns the scaled polynomial and the
    /// scale factor that was applied.
    pub fn canonical(&self) -> (Self, C) {
        if self.is_zero() {
            return (Self::zero(), C::one());
        }
        let coeffs: Vec<&C> = self.terms.iter().map(|(_, c)| c).collect();
        let s = C::canonical_scale(&coeffs);
        if s.is_one() {
            (self.clone(), s)
        } else {
            (self.scale(&s), s)
        }
    }

    pub fn evaluate<E: ScalarOver<C>>(&self, point: &[E]) -> E {
        let nv = self.num_vars();
        assert!(point.len() >= nv, "evaluation point has too few coordinates");
        let mut powers: Vec<Vec<E>> = vec![vec![E::one()]; nv];
        let mut total = E::zero();
        for (m, c) in &self.terms {
            let mut value = E::from_base(c);
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[v];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().clone() * point[v].clone();
                    table.push(next);
                }
                value = value * table[e as usize].clone();
            }
            total = total + value;
        }
        total
    }

    /// Substitutes polynomials for the variables `0..images.len()`; higher
    /// variables are kept.
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Self {
        let mut total = Self::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut value = Self::constant(c.clone());
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if v < images.len() {
                    value = &value * &images[v].pow(e as u32);
                } else {
                    rest.push((v, e));
                }
            }
            let mono = Monomial::from_exps(
                (0..m.len()).map(|i| rest.iter().find(|(v, _)| *v == i).map(|(_, e)| *e).unwrap_or(0)),
            );
            total = &total + &value.mul_monomial(&mono, &C::one());
        }
        total
    }

    pub fn derivative(&self, v: usize) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            if e == 0 {
                return None;
            }
            let factor = C::from_i64(e as i64);
            Some((m.with_exp(v, e - 1), c.clone() * factor))
        }))
    }

    /// Coefficients with respect to variable `v`, indexed by the power of `v`.
    pub fn to_univariate(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.without(v), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut terms| {
                terms.sort_by(|a, b| b.0.cmp(&a.0));
                Polynomial { terms }
            })
            .collect()
    }

    pub fn from_univariate(v: usize, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                terms.push((m.with_exp(v, e as u16), x.clone()));
            }
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Polynomial { terms }
    }

    /// Divides every exponent by `p` and takes p-th roots of coefficients;
    /// `None` if some exponent is not divisible by `p`.
    pub fn pth_root_substitute(&self, p: u64) -> Option<Self> {
        let p16 = p as u16;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exps().iter().any(|&e| e % p16 != 0) {
                return None;
            }
            terms.push((Monomial::from_exps(m.exps().iter().map(|&e| e / p16)), c.pth_root()));
        }
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Some(Polynomial { terms })
    }

    /// Applies a coefficient map; the result is re-sorted and zeros dropped.
    pub fn map_coeffs<D: BaseField, F: Fn(&C) -> Result<D>>(&self, f: F) -> Result<Polynomial<D>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = f(c)?;
            if !d.is_zero() {
                terms.push((m.clone(), d));
            }
        }
        Ok(Polynomial { terms })
    }

    /// Splits the terms by exponent residues modulo `p` in the variables
    /// `0..nvars`: returns, for each residue vector `a`, the polynomial
    /// `g_a` with `self = sum_a t^a g_a(t^p)` and the substitution
    /// `t^p -> t` already applied to `g_a`.
    pub fn frobenius_components(&self, p: u64, nvars: usize) -> Result<BTreeMap<Monomial, Self>> {
        let p16 = p as u16;
        let mut parts: BTreeMap<Monomial, Vec<(Monomial, C)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.len() > nvars {
                return Err(Error::Domain(format!(
                    "term {m} involves variables beyond the first {nvars}"
                )));
            }
            let residue = Monomial::from_exps(m.exps().iter().map(|&e| e % p16));
            let quotient = Monomial::from_exps(m.exps().iter().map(|&e| e / p16));
            parts.entry(residue).or_default().push((quotient, c.pth_root()));
        }
        Ok(parts
            .into_iter()
            .map(|(r, mut terms)| {
                terms.sort_by(|a, b| b.0.cmp(&a.0));
                (r, Polynomial { terms })
            })
            .collect())
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let text = c.to_string();
            let (negative, body) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{body}")?;
            } else {
                if body != "1" {
                    if body.contains('/') {
                        write!(f, "({body})*")?;
                    } else {
                        write!(f, "{body}*")?;
                    }
                }
                m.fmt_with(f, names)?;
            }
        }
        Ok(())
    }
}

fn merge<C: BaseField>(a: &[(Monomial, C)], b: &[(Monomial, C)], negate_b: bool) -> Vec<(Monomial, C)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -b[j].1.clone() } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b {
                    a[i].1.clone() - b[j].1.clone()
                } else {
                    a[i].1.clone() + b[j].1.clone()
                };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    for t in &b[j..] {
        let c = if negate_b { -t.1.clone() } else { t.1.clone() };
        out.push((t.0.clone(), c));
    }
    out
}

impl<'a, C: BaseField> Add<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        Polynomial {
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl<'a, C: BaseField> Sub<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        Polynomial {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl<'a, C: BaseField> Mul<&'a Polynomial<C>> for &'a Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &'a Polynomial<C>) -> Polynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return self.mul_monomial(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return rhs.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca.clone() * cb.clone();
                match acc.get_mut(&m) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Polynomial::from_map(acc)
    }
}

impl<C: BaseField> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: BaseField> Add for Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<C: BaseField> Sub for Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<C: BaseField> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: BaseField> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<C: BaseField> Zero for Polynomial<C> {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: BaseField> One for Polynomial<C> {
    fn one() -> Self {
        Polynomial::one()
    }
}

impl<C: BaseField> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_var_name)
    }
}

impl<C: BaseField> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Fp, Rational};

    type P = Polynomial<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn t(i: usize) -> P {
        P::var(i)
    }

    #[test]
    fn ring_basics() {
        let a = &t(0) + &t(1);
        let b = &t(0) - &t(1);
        let prod = &a * &b;
        let expected = &t(0).pow(2) - &t(1).pow(2);
        assert_eq!(prod, expected);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&(&t(0) + &t(2))), None);
    }

    #[test]
    fn display_is_readable() {
        let p = &(&t(0).pow(2).scale(&q(3)) - &t(1)) + &P::constant(q(2));
        assert_eq!(p.to_string(), "3*t1^2 - t2 + 2");
    }

    #[test]
    fn univariate_round_trip() {
        let p = &(&t(0).pow(2) * &t(1)) + &(&t(1) * &t(2));
        let parts = p.to_univariate(1);
        assert_eq!(parts.len(), 2);
        assert!(parts[0].is_zero());
        assert_eq!(P::from_univariate(1, &parts), p);
    }

    #[test]
    fn derivative_in_char_two_kills_even_powers() {
        let p: Polynomial<Fp<2>> = Polynomial::var(0).pow(2);
        assert!(p.derivative(0).is_zero());
    }

    #[test]
    fn frobenius_components_split_residues() {
        // t1^3 + t1*t2^2 over F_2  = t1 * (t1^2 + t2^2)
        let p: Polynomial<Fp<2>> =
            &Polynomial::var(0).pow(3) + &(&Polynomial::var(0) * &Polynomial::var(1).pow(2));
        let parts = p.frobenius_components(2, 2).unwrap();
        assert_eq!(parts.len(), 1);
        let (res, g) = parts.iter().next().unwrap();
        assert_eq!(res, &Monomial::var(0));
        assert_eq!(g, &(&Polynomial::var(0) + &Polynomial::var(1)));
    }
}
