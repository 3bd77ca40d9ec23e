//! Multivariate polynomial gcd.
//!
//! The algorithm is the recursive primitive polynomial remainder sequence,
//! preceded by a few cheap reductions: monomial contents, variables that
//! occur in only one argument, trial division, and a randomized probe that
//! proves coprimality (the common case for rational-function arithmetic)
//! without running the remainder sequence at all.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{BaseField, Field};
use super::monomial::Monomial;
use super::polynomial::Polynomial;

/// Canonical greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd<C: BaseField>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    if a.is_zero() {
        return b.canonical().0;
    }
    if b.is_zero() {
        return a.canonical().0;
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let a = if ma.is_one() { a.clone() } else { a.div_monomial(&ma) };
    let b = if mb.is_one() { b.clone() } else { b.div_monomial(&mb) };
    let g = gcd_no_monomial(&a, &b);
    g.mul_monomial(&mono, &C::one())
}

/// Gcd of a list, stopping early once it reaches 1.
pub fn gcd_many<'a, C: BaseField, I>(polys: I) -> Polynomial<C>
where
    I: IntoIterator<Item = &'a Polynomial<C>>,
{
    let mut acc = Polynomial::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn gcd_no_monomial<C: BaseField>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    let (a, _) = a.canonical();
    let (b, _) = b.canonical();
    if a == b {
        return a;
    }
    let va = a.vars();
    let vb = b.vars();
    let width = va.len().max(vb.len());
    let in_a = |v: usize| va.get(v).copied().unwrap_or(false);
    let in_b = |v: usize| vb.get(v).copied().unwrap_or(false);

    // A variable present in only one argument cannot occur in the gcd, so the
    // gcd divides every coefficient of that argument with respect to it.
    let only_a: Vec<bool> = (0..width).map(|v| in_a(v) && !in_b(v)).collect();
    if only_a.iter().any(|&x| x) {
        let mut parts = coefficients_in(&a, &only_a);
        parts.push(b.clone());
        parts.sort_by_key(|p| p.num_terms());
        return gcd_many(parts.iter());
    }
    let only_b: Vec<bool> = (0..width).map(|v| in_b(v) && !in_a(v)).collect();
    if only_b.iter().any(|&x| x) {
        let mut parts = coefficients_in(&b, &only_b);
        parts.push(a.clone());
        parts.sort_by_key(|p| p.num_terms());
        return gcd_many(parts.iter());
    }

    let common: Vec<usize> = (0..width).filter(|&v| in_a(v)).collect();
    let (small, large) = if a.num_terms() <= b.num_terms() { (&a, &b) } else { (&b, &a) };
    if small.total_degree() <= large.total_degree() && large.exact_div(small).is_some() {
        return small.clone();
    }
    if probably_coprime(&a, &b, &common) {
        return Polynomial::one();
    }
    // main variable: smallest degree bound keeps the remainder sequence short
    let v = *common
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).min(b.degree_in(v)), std::cmp::Reverse(v)))
        .expect("nonconstant polynomials mention a variable");
    prs_gcd(&a, &b, v)
}

/// Coefficients of `p` viewed as a polynomial in the flagged variables.
fn coefficients_in<C: BaseField>(p: &Polynomial<C>, flagged: &[bool]) -> Vec<Polynomial<C>> {
    let mut groups: std::collections::HashMap<Monomial, Vec<(Monomial, C)>> = Default::default();
    for (m, c) in p.terms() {
        let key = Monomial::from_exps(
            (0..m.len()).map(|i| if flagged.get(i).copied().unwrap_or(false) { m.exp(i) } else { 0 }),
        );
        let rest = Monomial::from_exps(
            (0..m.len()).map(|i| if flagged.get(i).copied().unwrap_or(false) { 0 } else { m.exp(i) }),
        );
        groups.entry(key).or_default().push((rest, c.clone()));
    }
    let mut out: Vec<Polynomial<C>> = groups.into_values().map(Polynomial::from_terms).collect();
    out.sort_by_key(|p| p.num_terms());
    out
}

/// Returns `true` only when `a` and `b` are certainly coprime: for every
/// common variable, a specialization of the remaining variables leaves
/// univariate images with a constant gcd while keeping the leading
/// coefficients nonzero. A `false` answer is inconclusive.
fn probably_coprime<C: BaseField>(a: &Polynomial<C>, b: &Polynomial<C>, common: &[usize]) -> bool {
    let width = a.num_vars().max(b.num_vars());
    let seed = (a.num_terms() as u64) << 32 ^ b.num_terms() as u64 ^ (width as u64) << 48;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'var: for &v in common {
        for _attempt in 0..3 {
            let point: Vec<C::Probe> = (0..width).map(|_| C::random_probe(&mut rng)).collect();
            let (Some(ua), Some(ub)) = (specialize(a, v, &point), specialize(b, v, &point)) else {
                continue;
            };
            if ua.len() != a.degree_in(v) as usize + 1 || ub.len() != b.degree_in(v) as usize + 1 {
                // a leading coefficient vanished at the point
                continue;
            }
            if univariate_gcd_degree(ua, ub) == 0 {
                continue 'var;
            }
            return false;
        }
        return false;
    }
    true
}

/// Image of `p` in `Probe[x_v]` after substituting `point` for the other
/// variables, as a dense coefficient vector with trailing zeros removed.
fn specialize<C: BaseField>(p: &Polynomial<C>, v: usize, point: &[C::Probe]) -> Option<Vec<C::Probe>> {
    let deg = p.degree_in(v) as usize;
    let mut coeffs = vec![C::Probe::zero(); deg + 1];
    for (m, c) in p.terms() {
        let mut value = c.to_probe()?;
        for (u, &e) in m.exps().iter().enumerate() {
            if u != v && e > 0 {
                value = value * point[u].pow(e as u64);
            }
        }
        let slot = &mut coeffs[m.exp(v) as usize];
        *slot = slot.clone() + value;
    }
    trim(&mut coeffs);
    Some(coeffs)
}

fn trim<F: Field>(v: &mut Vec<F>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

/// Degree of the gcd of two nonzero dense univariate polynomials.
pub(crate) fn univariate_gcd_degree<F: Field>(mut a: Vec<F>, mut b: Vec<F>) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = b.last().unwrap().inverse().expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = a.last().unwrap().clone() * inv.clone();
            for (i, bc) in b.iter().enumerate() {
                a[i + shift] = a[i + shift].clone() - factor.clone() * bc.clone();
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

type Univariate<C> = Vec<Polynomial<C>>;

fn content<C: BaseField>(u: &Univariate<C>) -> Polynomial<C> {
    let mut sorted: Vec<&Polynomial<C>> = u.iter().filter(|c| !c.is_zero()).collect();
    sorted.sort_by_key(|c| c.num_terms());
    gcd_many(sorted)
}

fn primitive_part<C: BaseField>(u: &Univariate<C>) -> (Polynomial<C>, Univariate<C>) {
    let c = content(u);
    if c.is_one() {
        return (c, u.clone());
    }
    let pp = u
        .iter()
        .map(|x| x.exact_div(&c).expect("content divides every coefficient"))
        .collect();
    (c, pp)
}

fn trim_univariate<C: BaseField>(u: &mut Univariate<C>) {
    while u.last().is_some_and(|x| x.is_zero()) {
        u.pop();
    }
}

/// Pseudo-remainder of `a` by `b` (both nonzero, in the same main variable).
fn pseudo_remainder<C: BaseField>(a: &Univariate<C>, b: &Univariate<C>) -> Univariate<C> {
    let mut r = a.clone();
    let lb = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.last().unwrap().clone();
        for x in r.iter_mut() {
            *x = &*x * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        r.pop();
        trim_univariate(&mut r);
    }
    r
}

fn prs_gcd<C: BaseField>(a: &Polynomial<C>, b: &Polynomial<C>, v: usize) -> Polynomial<C> {
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let (ca, mut pa) = primitive_part(&ua);
    let (cb, mut pb) = primitive_part(&ub);
    let c = gcd(&ca, &cb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    while pb.len() > 1 {
        let r = pseudo_remainder(&pa, &pb);
        if r.is_empty() {
            break;
        }
        let (_, pr) = primitive_part(&r);
        let pr = canonical_univariate(pr);
        pa = std::mem::replace(&mut pb, pr);
    }
    let g = if pb.len() == 1 {
        // the remainder sequence ended in a constant in v
        Polynomial::one()
    } else {
        Polynomial::from_univariate(v, &pb)
    };
    (&g * &c).canonical().0
}

/// Scales a univariate polynomial so that its coefficients stay small over
/// the rationals.
fn canonical_univariate<C: BaseField>(u: Univariate<C>) -> Univariate<C> {
    let coeffs: Vec<&C> = u
        .iter()
        .rev()
        .flat_map(|c| c.terms().iter().map(|(_, x)| x))
        .collect();
    let s = C::canonical_scale(&coeffs);
    if s.is_one() {
        u
    } else {
        u.iter().map(|c| c.scale(&s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Fp, Rational};

    type P = Polynomial<Rational>;

    fn t(i: usize) -> P {
        P::var(i)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn coprime_linear_forms() {
        let a = &t(0) - &t(1);
        let b = &t(0) + &t(1);
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn shared_factor_is_found() {
        let f = &t(0) - &t(1);
        let g = &(&t(0) * &t(2)) + &P::constant(q(3));
        let h = &t(1).pow(2) + &t(2);
        let a = &f * &g;
        let b = &(&f * &h).scale(&q(6)) * &t(0);
        assert_eq!(gcd(&a, &b), f.canonical().0);
    }

    #[test]
    fn monomial_parts() {
        let a = &t(0).pow(3) * &t(1);
        let b = &t(0) * &t(1).pow(2);
        assert_eq!(gcd(&a, &b), &t(0) * &t(1));
    }

    #[test]
    fn over_f2() {
        type Q2 = Polynomial<Fp<2>>;
        let x = Q2::var(0);
        let y = Q2::var(1);
        // x^2 + y^2 = (x + y)^2 over F_2
        let a = &x.pow(2) + &y.pow(2);
        let b = &(&x + &y) * &x;
        assert_eq!(gcd(&a, &b), &x + &y);
    }

    #[test]
    fn univariate_degree() {
        type F = Fp<7>;
        // (x-1)(x-2) and (x-1)(x-3)
        let a = vec![F::new(2), F::from_i64(-3), F::new(1)];
        let b = vec![F::new(3), F::from_i64(-4), F::new(1)];
        assert_eq!(univariate_gcd_degree(a, b), 1);
    }
}
