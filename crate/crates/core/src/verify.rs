//! Checks of anisotropy, Lefschetz and reduction statements on concrete
//! Gorenstein algebras.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{homology_sphere_failure, Face, SimplicialComplex, SimplicialCycle};
use crate::degree::{DegreeFunctional, GorensteinAlgebra, Lin};
use crate::jet::Jet;
use crate::error::{Error, Result};
use crate::linalg::{span_rank, Matrix};
use crate::reduction::{face_monomial, face_monomials, ArtinianAlgebra, MomentCurveLsop};
use crate::scalars::{gcd, BaseField, Field, Fp, Monomial, Polynomial, Rational, RationalFunction, ScalarOver};

/// Runs `$body` with `$P` bound to the supported prime `$p` as a constant.
#[macro_export]
macro_rules! with_prime {
    ($p:expr, $P:ident => $body:expr) => {
        match $p {
            2 => {
                const $P: u64 = 2;
                $body
            }
            3 => {
                const $P: u64 = 3;
                $body
            }
            5 => {
                const $P: u64 = 5;
                $body
            }
            7 => {
                const $P: u64 = 7;
                $body
            }
            11 => {
                const $P: u64 = 11;
                $body
            }
            13 => {
                const $P: u64 = 13;
                $body
            }
            other => Err($crate::Error::Config(format!(
                "unsupported prime {other}; supported primes are 2, 3, 5, 7, 11, 13"
            ))),
        }
    };
}

type RF<C> = RationalFunction<C>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictMode {
    ExactSemilinear,
    Randomized,
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictResult<F> {
    Anisotropic,
    /// A nonzero `u` with `u^exponent = 0`, in basis coordinates.
    KernelWitness(Vec<F>),
    Inconclusive(String),
}

/// Outcome of one p-th power stage of a descent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub degree: usize,
    pub exponent: usize,
    pub anisotropic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyVerdict<F> {
    pub mode: VerdictMode,
    pub k: usize,
    pub exponent: usize,
    pub result: VerdictResult<F>,
    pub stages: Vec<Stage>,
    pub certificates: Vec<DerivativeCertificate>,
    pub seed: Option<u64>,
}

impl<F> AnisotropyVerdict<F> {
    pub fn is_anisotropic(&self) -> bool {
        matches!(self.result, VerdictResult::Anisotropic)
    }

    pub fn label(&self) -> &'static str {
        match self.result {
            VerdictResult::Anisotropic => "anisotropic",
            VerdictResult::KernelWitness(_) => "kernel-witness",
            VerdictResult::Inconclusive(_) => "inconclusive",
        }
    }
}

/// A face `τ = ξ ⊔ ι` with `∂_ξ deg(u^p x_ι) ≠ 0`.
///
/// The derivative is evaluated exactly at `point` (with `ρ = rho`, which
/// does not affect the value); a nonzero value there proves the rational
/// function is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeCertificate {
    pub tau: Face,
    pub xi: Face,
    pub iota: Face,
    pub point: Vec<String>,
    pub rho: String,
    pub derivative: String,
}

fn characteristic_of<C: BaseField>() -> Result<u64> {
    match C::characteristic() {
        0 => Err(Error::WrongMode(
            "p-th power checks need a field of positive characteristic; use the rational pipeline".into(),
        )),
        p => Ok(p),
    }
}

fn lcm<C: BaseField>(a: &Polynomial<C>, b: &Polynomial<C>) -> Polynomial<C> {
    let g = gcd(a, b);
    a * &b.exact_div(&g).expect("gcd divides")
}

/// Decides whether `u ↦ u^p` is injective on `B^k` in characteristic `p`.
///
/// The map is additive and `p`-semilinear, so its kernel is
/// `{Σ λ_i e_i : Σ λ_i^p e_i^p = 0}`. Columns `e_i^p` are scaled by `p`-th
/// powers of their denominators, and each polynomial entry `f` is split as
/// `Σ_a t^a g_a(t)^p` over residues `0 <= a_v < p`. A dependence
/// `Σ ν_i^p N_i = 0` then holds exactly when `Σ ν_i g_{i,a} = 0` for every
/// row and residue, which is ordinary linear algebra over `K(t)`.
pub fn check_p_anisotropy<C: BaseField>(ga: &GorensteinAlgebra<RF<C>>, k: usize) -> Result<AnisotropyVerdict<RF<C>>> {
    let p = characteristic_of::<C>()? as usize;
    let d = ga.d();
    if p * k > d {
        return Err(Error::Range { degree: p * k, built: d });
    }
    let basis = ga.basis(k)?.to_vec();
    let s = basis.len();
    let verdict = |result| AnisotropyVerdict {
        mode: VerdictMode::ExactSemilinear,
        k,
        exponent: p,
        result,
        stages: vec![Stage {
            degree: k,
            exponent: p,
            anisotropic: false,
        }],
        certificates: Vec::new(),
        seed: None,
    };
    if s == 0 {
        let mut v = verdict(VerdictResult::Anisotropic);
        v.stages[0].anisotropic = true;
        return Ok(v);
    }
    let nvars = ga.degree_functional().n();
    let mut columns = Vec::with_capacity(s);
    let mut scales = Vec::with_capacity(s);
    for f in &basis {
        let col = ga.coords(&face_monomial(*f).pow(p as u16))?;
        let mut den = Polynomial::one();
        for x in col.iter().filter(|x| !x.is_zero()) {
            den = lcm(&den, x.denominator());
        }
        let scale = den.pow(p as u32);
        let cleared: Vec<Polynomial<C>> = col
            .iter()
            .map(|x| {
                if x.is_zero() {
                    Polynomial::zero()
                } else {
                    let cofactor = scale.exact_div(x.denominator()).expect("denominator divides the lcm");
                    x.numerator() * &cofactor
                }
            })
            .collect();
        columns.push(cleared);
        scales.push(RF::from_polynomial(den));
    }
    // rows indexed by (coordinate, residue)
    let mut rows: std::collections::BTreeMap<(usize, Monomial), Vec<RF<C>>> = std::collections::BTreeMap::new();
    for (i, col) in columns.iter().enumerate() {
        for (j, entry) in col.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            for (residue, g) in entry.frobenius_components(p as u64, nvars)? {
                let row = rows.entry((j, residue)).or_insert_with(|| vec![RF::zero(); s]);
                row[i] = RF::from_polynomial(g);
            }
        }
    }
    let m = Matrix::from_rows(rows.into_values().collect(), s);
    if numeric_full_rank::<C>(&m) {
        let mut v = verdict(VerdictResult::Anisotropic);
        v.stages[0].anisotropic = true;
        return Ok(v);
    }
    let kernel = m.kernel();
    let Some(nu) = kernel.first() else {
        let mut v = verdict(VerdictResult::Anisotropic);
        v.stages[0].anisotropic = true;
        return Ok(v);
    };
    let u: Vec<RF<C>> = nu.iter().zip(&scales).map(|(a, b)| a.clone() * b.clone()).collect();
    let power = ga.power(k, &u, p)?;
    if u.iter().all(|x| x.is_zero()) || power.iter().any(|x| !x.is_zero()) {
        return Err(Error::Internal("semilinear kernel vector is not a p-th power witness".into()));
    }
    Ok(verdict(VerdictResult::KernelWitness(u)))
}

/// Full column rank at a fixed pseudo-random point proves full rank over
/// `K(t)`, since specialization never raises rank.
fn numeric_full_rank<C: BaseField>(m: &Matrix<RF<C>>) -> bool {
    let nvars = (0..m.rows())
        .flat_map(|r| m.row(r).iter().map(|x| x.num_vars()))
        .max()
        .unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let point: Vec<C::Eval> = (0..nvars).map(|_| C::random_eval(&mut rng)).collect();
    match m.try_map(|x| x.evaluate(&point)) {
        Ok(e) => e.rank() == m.cols(),
        Err(_) => false,
    }
}

/// `u^{pm} ≠ 0` for all nonzero `u ∈ B^k`, by descent through p-th powers:
/// `u^{pm} = (u^m)^p` needs injectivity on `B^{mk}` and `u^m ≠ 0`; the latter
/// follows from `u^{pn} ≠ 0` for the least `n` with `pn >= m`, and so on
/// down to exponent one.
pub fn check_pm_anisotropy<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    m: usize,
    k: usize,
) -> Result<AnisotropyVerdict<RF<C>>> {
    let p = characteristic_of::<C>()? as usize;
    let d = ga.d();
    if m == 0 || k == 0 || p * m * k > d {
        return Err(Error::Range {
            degree: p * m * k,
            built: d,
        });
    }
    let mut exponents = vec![m];
    while let Some(&e) = exponents.last() {
        if e == 1 {
            break;
        }
        exponents.push(e.div_ceil(p));
    }
    let mut stages = Vec::new();
    let mut result = VerdictResult::Anisotropic;
    for &e in &exponents {
        let v = check_p_anisotropy(ga, e * k)?;
        let ok = v.is_anisotropic();
        stages.push(Stage {
            degree: e * k,
            exponent: p,
            anisotropic: ok,
        });
        if !ok && matches!(result, VerdictResult::Anisotropic) {
            result = match v.result {
                VerdictResult::KernelWitness(w) if m == 1 => VerdictResult::KernelWitness(w),
                _ => VerdictResult::Inconclusive(format!(
                    "p-th power map is not injective on degree {}; the descent does not apply",
                    e * k
                )),
            };
        }
    }
    Ok(AnisotropyVerdict {
        mode: VerdictMode::ExactSemilinear,
        k,
        exponent: p * m,
        result,
        stages,
        certificates: Vec::new(),
        seed: None,
    })
}

/// `deg(u^p x_ι)` for `u ∈ B^k` through Lee's formula, using
/// `u^p = Σ λ_a^p x_{σ_a}^p` in characteristic `p`.
pub fn degree_of_power_times<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    k: usize,
    u: &[RF<C>],
    iota: Face,
) -> Result<RF<C>> {
    let p = characteristic_of::<C>()?;
    let df = ga.degree_functional();
    let xi = face_monomial(iota);
    let mut acc = RF::zero();
    for (f, c) in ga.basis(k)?.iter().zip(u) {
        if c.is_zero() {
            continue;
        }
        let value = df.degree_monomial(&face_monomial(*f).pow(p as u16).mul(&xi))?;
        if !value.is_zero() {
            acc = acc + c.pow(p) * value;
        }
    }
    Ok(acc)
}

/// `∂_ξ deg(u^p x_ι)` as a rational function. Slow on larger complexes;
/// [`derivative_certificate`] evaluates the same quantity at points.
pub fn symbolic_derivative<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    k: usize,
    u: &[RF<C>],
    xi: Face,
    iota: Face,
) -> Result<RF<C>> {
    let mut value = degree_of_power_times(ga, k, u, iota)?;
    for v in xi.vertices() {
        value = value.partial_derivative(v - 1);
    }
    Ok(value)
}

/// Random distinct nonzero parameters and a general `ρ`.
fn random_point<C: BaseField, R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Vec<C::Eval>, C::Eval) {
    let mut pts: Vec<C::Eval> = Vec::with_capacity(n + 1);
    while pts.len() < n + 1 {
        let x = C::random_eval(rng);
        if !pts.contains(&x) {
            pts.push(x);
        }
    }
    let rho = pts.pop().expect("n + 1 entries");
    (pts, rho)
}

/// `∂_ξ deg(u^p x_ι)` at a point, from Lee's formula over jets in the
/// variables of `ξ`. `None` when the point is a pole of some term.
fn derivative_at<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    basis: &[Face],
    u_at: &[C::Eval],
    p: u64,
    xi: Face,
    iota: Face,
    point: &[C::Eval],
    rho: &C::Eval,
) -> Result<Option<C::Eval>> {
    let df = ga.degree_functional();
    let xs: Vec<usize> = xi.to_vec();
    let m = xs.len();
    let t = |j: usize| -> Jet<C::Eval> {
        match xs.iter().position(|&v| v == j) {
            Some(g) => Jet::variable(m, point[j - 1].clone(), g),
            None => Jet::constant(m, point[j - 1].clone()),
        }
    };
    let r = Jet::constant(m, rho.clone());
    let x_iota = face_monomial(iota);
    let mut total = Jet::constant(m, C::Eval::zero());
    for (f, lambda) in basis.iter().zip(u_at) {
        if lambda.is_zero() {
            continue;
        }
        let alpha = face_monomial(*f).pow(p as u16).mul(&x_iota);
        let mut value = Jet::constant(m, C::Eval::zero());
        for (coeff, factors) in df.lee_expansion(&alpha) {
            let c = coeff
                .constant_value()
                .ok_or_else(|| Error::Internal("cycle coefficient is not constant".into()))?;
            let mut term = Jet::constant(m, C::Eval::from_base(&c));
            for (lin, e) in factors {
                let base = match lin {
                    Lin::T(j) => t(j),
                    Lin::R => r.clone(),
                    Lin::D(a, b) => t(b).sub(&t(a)),
                    Lin::Dr(j) => t(j).sub(&r),
                };
                match base.powi(e) {
                    Some(x) => term = term.mul(&x),
                    None => return Ok(None),
                }
            }
            value = value.add(&term);
        }
        // λ^p has vanishing derivatives in characteristic p
        total = total.add(&value.scale(&lambda.pow(p)));
    }
    Ok(Some(total.top().clone()))
}

const CERTIFICATE_POINTS: usize = 3;

/// Searches `τ` with `x_τ u ≠ 0` and splits `τ = ξ ⊔ ι` with
/// `|ξ| = (p-1)k` until `∂_ξ deg(u^p x_ι)` is nonzero at a random point.
///
/// A split whose derivative vanishes at several independent points is
/// skipped; `None` means no split produced a certificate.
pub fn derivative_certificate<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    k: usize,
    u: &[RF<C>],
    seed: u64,
) -> Result<Option<DerivativeCertificate>> {
    let p = characteristic_of::<C>()?;
    let d = ga.d();
    if u.iter().all(|x| x.is_zero()) {
        return Err(Error::TrivialInput("u is zero".into()));
    }
    if p as usize * k > d {
        return Err(Error::Range { degree: p as usize * k, built: d });
    }
    if u.len() != ga.dim(k) {
        return Err(Error::Dimension("coordinate vector has the wrong length".into()));
    }
    let n = ga.degree_functional().n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(CERTIFICATE_POINTS);
    while points.len() < CERTIFICATE_POINTS {
        let (pt, rho) = random_point::<C, _>(&mut rng, n);
        if let Ok(u_at) = u.iter().map(|x| x.evaluate(&pt)).collect::<Result<Vec<_>>>() {
            points.push((pt, rho, u_at));
        }
    }
    let basis = ga.basis(k)?.to_vec();
    for &tau in ga.complex().faces_of_size(d - k) {
        let xt = face_monomial(tau);
        let mut pairing = RF::zero();
        for (f, c) in basis.iter().zip(u) {
            if !c.is_zero() {
                pairing = pairing + c.clone() * ga.degree_of_monomial(&xt.mul(&face_monomial(*f)))?;
            }
        }
        if pairing.is_zero() {
            continue;
        }
        for xi in tau.subsets_of_size((p as usize - 1) * k) {
            let iota = tau.minus(xi);
            for (pt, rho, u_at) in &points {
                if let Some(v) = derivative_at::<C>(ga, &basis, u_at, p, xi, iota, pt, rho)? {
                    if !v.is_zero() {
                        return Ok(Some(DerivativeCertificate {
                            tau,
                            xi,
                            iota,
                            point: pt.iter().map(|x| x.to_string()).collect(),
                            rho: rho.to_string(),
                            derivative: v.to_string(),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Checks `x_ι u^p ≠ 0` by direct multiplication in `B`, first at a random
/// point and, if the product vanishes there, over `K(t)`.
pub fn confirm_certificate<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    k: usize,
    u: &[RF<C>],
    cert: &DerivativeCertificate,
    seed: u64,
) -> Result<bool> {
    let p = characteristic_of::<C>()? as usize;
    let iota = cert.iota;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = Specialization::random(ga, &mut rng);
    let numeric = spec.evaluate_all(u).and_then(|v| {
        let w = spec.power(k, &v, p)?;
        let x = spec.coords(&face_monomial(iota))?;
        spec.multiply(p * k, &w, iota.len(), &x)
    });
    if let Ok(prod) = numeric {
        if prod.iter().any(|x| !x.is_zero()) {
            return Ok(true);
        }
    }
    let w = ga.power(k, u, p)?;
    let x = ga.coords(&face_monomial(iota))?;
    Ok(ga.multiply(p * k, &w, iota.len(), &x)?.iter().any(|x| !x.is_zero()))
}

/// Comparison of the facet term of Lee's formula for `deg(x_σ^p x_ι)` with
/// its closed form on the moment curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmCheck<F> {
    pub tm: F,
    /// `μ_F Π_{S}(t_b - t_a) Π_{ι}(t_b - t_a)^{-1} Π_{j ∈ ι} t_j^{-1} Π_{j ∈ S}(t_j - r)`
    /// with `S = ξ ∪ σ`.
    pub closed_form: F,
    /// The same without the `t_j^{-1}` and `(t_j - r)` factors.
    pub reduced_form: F,
    pub passes: bool,
    pub reduced_passes: bool,
}

fn vandermonde<F: Field>(lsop: &MomentCurveLsop<F>, face: Face) -> F {
    let vs = face.to_vec();
    let mut acc = F::one();
    for (x, &a) in vs.iter().enumerate() {
        for &b in &vs[x + 1..] {
            acc = acc * (lsop.param(b).clone() - lsop.param(a).clone());
        }
    }
    acc
}

/// Checks that `tm(F)` agrees with its closed form up to a p-th power.
pub fn tm_closed_form_check<C: BaseField>(
    df: &DegreeFunctional<RF<C>>,
    face: Face,
    xi: Face,
    sigma: Face,
    iota: Face,
) -> Result<TmCheck<RF<C>>> {
    let p = characteristic_of::<C>()? as usize;
    let d = df.d();
    if !xi.is_disjoint(sigma) || !xi.is_disjoint(iota) || !sigma.is_disjoint(iota) {
        return Err(Error::Partition("parts are not disjoint".into()));
    }
    if xi.union(sigma).union(iota) != face {
        return Err(Error::Partition(format!("parts do not cover {face}")));
    }
    if face.len() != d || !df.coefficients().contains_key(&face) {
        return Err(Error::Partition(format!("{face} is not a facet of the support")));
    }
    if xi.len() != (p - 1) * sigma.len() {
        return Err(Error::Partition(format!(
            "|ξ| = {} but (p - 1)|σ| = {}",
            xi.len(),
            (p - 1) * sigma.len()
        )));
    }
    let alpha = face_monomial(sigma).pow(p as u16).mul(&face_monomial(iota));
    let tm = df.lee_term(face, &alpha)?;
    let lsop = df.lsop();
    let mu = df.coefficients()[&face].clone();
    let s = xi.union(sigma);
    let inv = |x: RF<C>| x.inverse().expect("nonzero");
    let reduced_form = mu * vandermonde(lsop, s) * inv(vandermonde(lsop, iota));
    let mut closed_form = reduced_form.clone();
    for j in iota.vertices() {
        closed_form = closed_form * inv(lsop.param(j).clone());
    }
    for j in s.vertices() {
        closed_form = closed_form * (lsop.param(j).clone() - df.rho().clone());
    }
    let test = |other: &RF<C>| -> Result<bool> {
        Ok((tm.clone() * inv(other.clone())).is_pth_power(p as u64)?.is_some())
    };
    let passes = test(&closed_form)?;
    let reduced_passes = test(&reduced_form)?;
    Ok(TmCheck {
        tm,
        closed_form,
        reduced_form,
        passes,
        reduced_passes,
    })
}

/// Every facet and every partition `F = ξ ⊔ σ ⊔ ι` with `|σ| = k` and
/// `|ξ| = (p-1)k`.
pub fn tm_partitions(df_facets: &[Face], p: usize, k: usize) -> Vec<(Face, Face, Face, Face)> {
    let mut out = Vec::new();
    for &f in df_facets {
        for sigma in f.subsets_of_size(k) {
            for xi in f.minus(sigma).subsets_of_size((p - 1) * k) {
                out.push((f, xi, sigma, f.minus(sigma).minus(xi)));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzResult {
    pub k: usize,
    pub dim: usize,
    pub rank: usize,
    pub iso: bool,
    pub attempts: usize,
    pub seed: Option<u64>,
}

/// Rank of multiplication by `ℓ^{d-2k}: B^k → B^{d-k}` for
/// `ℓ = Σ c_v x_v` (one coefficient per vertex).
pub fn check_lefschetz<F: Field>(ga: &GorensteinAlgebra<F>, ell: &[F], k: usize) -> Result<LefschetzResult> {
    let d = ga.d();
    if 2 * k > d {
        return Err(Error::Range { degree: 2 * k, built: d });
    }
    let mut l = vec![F::zero(); ga.dim(1)];
    for (v, c) in ell.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let x = ga.coords(&Monomial::var(v))?;
        for (slot, y) in l.iter_mut().zip(x) {
            *slot = slot.clone() + c.clone() * y;
        }
    }
    let dim = ga.dim(k);
    let mut columns = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = vec![F::zero(); dim];
        e[i] = F::one();
        for step in 0..d - 2 * k {
            e = ga.multiply(k + step, &e, 1, &l)?;
        }
        columns.push(e);
    }
    let rank = span_rank(&columns, ga.dim(d - k));
    Ok(LefschetzResult {
        k,
        dim,
        rank,
        iso: rank == dim && dim == ga.dim(d - k),
        attempts: 1,
        seed: None,
    })
}

/// A random element of `K(t)` of the form `a + b t_j`.
pub fn random_coefficient<C: BaseField, R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> RF<C> {
    let a = RF::constant(C::random_small(rng));
    if nvars == 0 {
        return a;
    }
    let j = rng.gen_range(0..nvars);
    a + RF::var(j).scale(&C::random_small(rng))
}

/// The structure constants of `B` evaluated at a point of parameter space.
///
/// Evaluation is a ring map, so a nonzero product or a full-rank matrix here
/// proves the same over `K(t)`; the converse needs the symbolic route.
pub struct Specialization<'a, C: BaseField> {
    ga: &'a GorensteinAlgebra<RF<C>>,
    point: Vec<C::Eval>,
    memo: RefCell<HashMap<Monomial, Vec<C::Eval>>>,
}

impl<'a, C: BaseField> Specialization<'a, C> {
    /// A random point avoiding the poles met so far is not guaranteed;
    /// poles surface later as [`Error::EvaluationPole`].
    pub fn random<R: Rng + ?Sized>(ga: &'a GorensteinAlgebra<RF<C>>, rng: &mut R) -> Self {
        let (point, _) = random_point::<C, _>(rng, ga.degree_functional().n());
        Specialization {
            ga,
            point,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn point(&self) -> &[C::Eval] {
        &self.point
    }

    pub fn evaluate(&self, x: &RF<C>) -> Result<C::Eval> {
        x.evaluate(&self.point)
    }

    pub fn evaluate_all(&self, xs: &[RF<C>]) -> Result<Vec<C::Eval>> {
        xs.iter().map(|x| self.evaluate(x)).collect()
    }

    pub fn coords(&self, m: &Monomial) -> Result<Vec<C::Eval>> {
        if let Some(v) = self.memo.borrow().get(m) {
            return Ok(v.clone());
        }
        let v = self.evaluate_all(&self.ga.coords(m)?)?;
        self.memo.borrow_mut().insert(m.clone(), v.clone());
        Ok(v)
    }

    pub fn multiply(&self, j: usize, u: &[C::Eval], k: usize, v: &[C::Eval]) -> Result<Vec<C::Eval>> {
        let bj = self.ga.basis(j)?;
        let bk = self.ga.basis(k)?;
        let mut out = vec![C::Eval::zero(); self.ga.dim(j + k)];
        for (f, a) in bj.iter().zip(u) {
            if a.is_zero() {
                continue;
            }
            for (g, b) in bk.iter().zip(v) {
                if b.is_zero() {
                    continue;
                }
                let c = a.clone() * b.clone();
                let prod = self.coords(&face_monomial(*f).mul(&face_monomial(*g)))?;
                for (slot, x) in out.iter_mut().zip(prod) {
                    *slot = slot.clone() + c.clone() * x;
                }
            }
        }
        Ok(out)
    }

    pub fn power(&self, k: usize, u: &[C::Eval], e: usize) -> Result<Vec<C::Eval>> {
        if e == 0 {
            return Err(Error::Domain("exponent must be positive".into()));
        }
        let mut acc = u.to_vec();
        for i in 1..e {
            acc = self.multiply(k * i, &acc, k, u)?;
        }
        Ok(acc)
    }

    /// Columns of multiplication by `ℓ^{d-2k}` on `B^k`.
    pub fn lefschetz_columns(&self, ell: &[C::Eval], k: usize) -> Result<Vec<Vec<C::Eval>>> {
        let d = self.ga.d();
        let mut l = vec![C::Eval::zero(); self.ga.dim(1)];
        for (v, c) in ell.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, y) in l.iter_mut().zip(self.coords(&Monomial::var(v))?) {
                *slot = slot.clone() + c.clone() * y;
            }
        }
        let dim = self.ga.dim(k);
        let mut columns = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut e = vec![C::Eval::zero(); dim];
            e[i] = C::Eval::one();
            for step in 0..d - 2 * k {
                e = self.multiply(k + step, &e, 1, &l)?;
            }
            columns.push(e);
        }
        Ok(columns)
    }
}

/// [`check_lefschetz`] with random `ℓ`, retried with fresh seeds.
///
/// Each attempt first computes the rank at a random point; only when that
/// is deficient is the rank recomputed over `K(t)`.
pub fn check_lefschetz_random<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    k: usize,
    seed: u64,
    retries: usize,
) -> Result<LefschetzResult> {
    let d = ga.d();
    if 2 * k > d {
        return Err(Error::Range { degree: 2 * k, built: d });
    }
    let n = ga.degree_functional().n();
    let mut last = None;
    for attempt in 0..=retries {
        let s = seed.wrapping_add(attempt as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let ell: Vec<RF<C>> = (0..n).map(|_| random_coefficient::<C, _>(&mut rng, n)).collect();
        let spec = Specialization::random(ga, &mut rng);
        let numeric = spec
            .evaluate_all(&ell)
            .and_then(|l| spec.lefschetz_columns(&l, k))
            .map(|cols| span_rank(&cols, ga.dim(d - k)));
        let dim = ga.dim(k);
        let mut r = match numeric {
            Ok(rank) if rank == dim && dim == ga.dim(d - k) => LefschetzResult {
                k,
                dim,
                rank,
                iso: true,
                attempts: 1,
                seed: None,
            },
            _ => check_lefschetz(ga, &ell, k)?,
        };
        r.attempts = attempt + 1;
        r.seed = Some(s);
        if r.iso {
            return Ok(r);
        }
        last = Some(r);
    }
    Ok(last.expect("at least one attempt"))
}

/// A random nonzero element of `B^k`.
pub fn random_element<C: BaseField, R: Rng + ?Sized>(ga: &GorensteinAlgebra<RF<C>>, k: usize, rng: &mut R) -> Vec<RF<C>> {
    let n = ga.degree_functional().n();
    let dim = ga.dim(k);
    loop {
        let u: Vec<RF<C>> = (0..dim).map(|_| random_coefficient::<C, _>(rng, n)).collect();
        if dim == 0 || u.iter().any(|x| !x.is_zero()) {
            return u;
        }
    }
}

/// Samples nonzero `u ∈ B^k` and counts those with `u^e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleReport {
    pub samples: usize,
    pub vanishing: usize,
    pub seed: u64,
}

pub fn sample_powers<C: BaseField>(
    ga: &GorensteinAlgebra<RF<C>>,
    k: usize,
    exponent: usize,
    samples: usize,
    seed: u64,
) -> Result<SampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = Specialization::random(ga, &mut rng);
    let mut vanishing = 0;
    if ga.dim(k) > 0 {
        for _ in 0..samples {
            let u = random_element(ga, k, &mut rng);
            let numeric = spec
                .evaluate_all(&u)
                .and_then(|v| spec.power(k, &v, exponent))
                .map(|w| w.iter().any(|x| !x.is_zero()));
            if matches!(numeric, Ok(true)) {
                continue;
            }
            if ga.power(k, &u, exponent)?.iter().all(|x| x.is_zero()) {
                vanishing += 1;
            }
        }
    }
    Ok(SampleReport {
        samples,
        vanishing,
        seed,
    })
}

/// Squarefree monomials forming a basis of `A^k` over both `F_p(t)` and
/// `Q(t)`. Fails with a torsion error when the dimensions differ.
pub fn lift_basis<const P: u64>(
    a_p: &ArtinianAlgebra<RF<Fp<P>>>,
    a_q: &ArtinianAlgebra<RF<Rational>>,
    k: usize,
) -> Result<Vec<Face>> {
    let (piece_p, piece_q) = (a_p.piece(k)?, a_q.piece(k)?);
    if piece_p.dim() != piece_q.dim() {
        return Err(Error::Torsion {
            degree: k,
            dim_p: piece_p.dim(),
            dim_q: piece_q.dim(),
        });
    }
    let mut faces = Vec::with_capacity(piece_p.dim());
    for m in piece_p.basis_monomials() {
        if !m.is_squarefree() {
            return Err(Error::Internal("basis monomial is not squarefree".into()));
        }
        faces.push(crate::reduction::monomial_support(m));
    }
    let rational: Vec<Vec<RF<Rational>>> = faces.iter().map(|f| piece_q.expand(&face_monomial(*f))).collect();
    if span_rank(&rational, piece_q.dim()) != faces.len() {
        return Err(Error::Internal(
            "monomials independent in characteristic p are dependent over the rationals".into(),
        ));
    }
    Ok(faces)
}

/// Builds `A` and `B` for `cycle` with symbolic parameters on its support.
pub fn build_symbolic<C: BaseField>(cycle: &SimplicialCycle<C>) -> Result<GorensteinAlgebra<RF<C>>> {
    let df = DegreeFunctional::symbolic(cycle)?;
    let a = ArtinianAlgebra::build(&cycle.support(), df.lsop(), cycle.d())?;
    GorensteinAlgebra::gorensteinify(a, df)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketReport {
    pub p: u64,
    pub samples: usize,
    pub violations: Vec<String>,
    pub seed: u64,
}

impl BracketReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `[deg(v)]` with `deg([v])` for `v = Σ λ_α x^α ∈ A^d` over
/// `Q(t)`, after scaling `v` by a power of `P` so that the least `ord_P` of
/// the coefficients is zero. Returns the two sides.
pub fn bracket_pair<const P: u64>(
    ga_q: &GorensteinAlgebra<RF<Rational>>,
    ga_p: &GorensteinAlgebra<RF<Fp<P>>>,
    v: &[(Monomial, RF<Rational>)],
) -> Result<(RF<Fp<P>>, RF<Fp<P>>)> {
    let nonzero: Vec<&(Monomial, RF<Rational>)> = v.iter().filter(|(_, c)| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::TrivialInput("v is zero".into()));
    }
    let shift = nonzero
        .iter()
        .map(|(_, c)| c.ord_p(P))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("nonempty");
    let factor = num_traits::pow(Rational::from_integer(P.into()), shift.unsigned_abs() as usize);
    let factor = if shift > 0 { Field::inverse(&factor).expect("nonzero") } else { factor };
    let mut lhs = RF::zero();
    let mut rhs = RF::zero();
    for (m, c) in nonzero {
        let c = c.scale(&factor);
        lhs = lhs + c.clone() * ga_q.degree_of_monomial(m)?;
        rhs = rhs + c.bracket_reduce::<P>()? * ga_p.degree_of_monomial(m)?;
    }
    Ok((lhs.bracket_reduce::<P>()?, rhs))
}

/// A random coefficient over `Q(t)` whose `P`-adic valuation varies.
fn random_rational_coefficient<R: Rng + ?Sized>(rng: &mut R, p: u64, nvars: usize) -> RF<Rational> {
    let base: RF<Rational> = random_coefficient::<Rational, _>(rng, nvars);
    let e: i32 = rng.gen_range(-1..=2);
    let pp = Rational::from_integer(p.into());
    let scale = if e >= 0 {
        num_traits::pow(pp, e as usize)
    } else {
        Field::inverse(&pp).expect("nonzero")
    };
    base.scale(&scale)
}

/// Samples elements of `A^d` and checks `[deg(v)] = deg([v])` on each.
pub fn bracket_degree_check<const P: u64>(
    ga_q: &GorensteinAlgebra<RF<Rational>>,
    ga_p: &GorensteinAlgebra<RF<Fp<P>>>,
    samples: usize,
    seed: u64,
) -> Result<BracketReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monomials = face_monomials(ga_q.complex(), ga_q.d());
    let n = ga_q.degree_functional().n();
    let mut violations = Vec::new();
    for i in 0..samples {
        let mut v = Vec::new();
        while v.iter().all(|(_, c): &(Monomial, RF<Rational>)| c.is_zero()) {
            v.clear();
            let terms = rng.gen_range(1..=3.min(monomials.len()));
            for _ in 0..terms {
                let m = monomials[rng.gen_range(0..monomials.len())].clone();
                v.push((m, random_rational_coefficient(&mut rng, P, n)));
            }
        }
        let (lhs, rhs) = bracket_pair::<P>(ga_q, ga_p, &v)?;
        if lhs != rhs {
            violations.push(format!("sample {i}: [deg(v)] = {lhs} but deg([v]) = {rhs}"));
        }
    }
    Ok(BracketReport {
        p: P,
        samples,
        violations,
        seed,
    })
}

/// Per-prime record of the rational pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeStage {
    pub p: u64,
    pub sphere_failure: Option<Face>,
    pub dims_p: Vec<usize>,
    pub dims_q: Vec<usize>,
    pub gorenstein: bool,
    pub lifted: Vec<(usize, Vec<Face>)>,
    /// `(k, verdict label)` of the characteristic-p anisotropy stages.
    pub anisotropy: Vec<(usize, String)>,
    pub bracket: Option<BracketReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RationalVerdict {
    Anisotropic,
    HypothesisFailure { p: u64, face: Face },
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalAnisotropyReport {
    pub m: usize,
    pub verdict: RationalVerdict,
    pub stages: Vec<PrimeStage>,
}

fn prime_divisors(mut m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            out.push(q as u64);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        out.push(m as u64);
    }
    out
}

/// `u^m ≠ 0` for nonzero `u ∈ B^k(Q(t))`, `k <= d/m`, from the
/// characteristic-p statements for the primes dividing `m`.
pub fn check_rational_anisotropy(
    complex: &SimplicialComplex,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<RationalAnisotropyReport> {
    if m < 2 {
        return Err(Error::Config("m must be at least 2".into()));
    }
    let (complex, _) = complex.compact();
    let primes = prime_divisors(m);
    for &p in &primes {
        let failure: Result<Option<Face>> = with_prime!(p, P => Ok(homology_sphere_failure::<Fp<P>>(&complex)));
        if let Some(face) = failure? {
            let stage = PrimeStage {
                p,
                sphere_failure: Some(face),
                dims_p: Vec::new(),
                dims_q: Vec::new(),
                gorenstein: false,
                lifted: Vec::new(),
                anisotropy: Vec::new(),
                bracket: None,
            };
            return Ok(RationalAnisotropyReport {
                m,
                verdict: RationalVerdict::HypothesisFailure { p, face },
                stages: vec![stage],
            });
        }
    }
    let mu_q = SimplicialCycle::<Rational>::fundamental(&complex)?;
    let ga_q = build_symbolic(&mu_q)?;
    let mut stages = Vec::new();
    let mut verdict = RationalVerdict::Anisotropic;
    for &p in &primes {
        let stage: Result<PrimeStage> = with_prime!(p, P => prime_stage::<P>(&mu_q, &ga_q, m, samples, seed));
        let stage = stage?;
        if matches!(verdict, RationalVerdict::Anisotropic) {
            if !stage.gorenstein {
                verdict = RationalVerdict::Inconclusive(format!("A differs from B at p = {p}"));
            } else if let Some((k, label)) = stage.anisotropy.iter().find(|(_, l)| l != "anisotropic") {
                verdict = RationalVerdict::Inconclusive(format!("stage k = {k} at p = {p} is {label}"));
            } else if stage.bracket.as_ref().is_some_and(|b| !b.passed()) {
                verdict = RationalVerdict::Inconclusive(format!("bracket check failed at p = {p}"));
            }
        }
        stages.push(stage);
    }
    Ok(RationalAnisotropyReport { m, verdict, stages })
}

fn prime_stage<const P: u64>(
    mu_q: &SimplicialCycle<Rational>,
    ga_q: &GorensteinAlgebra<RF<Rational>>,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<PrimeStage> {
    let mu_p = mu_q.reduce::<P>()?;
    let ga_p = build_symbolic(&mu_p)?;
    let d = ga_q.d();
    let dims_p = ga_p.dims();
    let dims_q = ga_q.dims();
    let gorenstein = ga_p.artinian().dims() == dims_p && ga_q.artinian().dims() == dims_q;
    let mut lifted = Vec::new();
    let mut anisotropy = Vec::new();
    for k in 1..=d / m {
        lifted.push((k, lift_basis::<P>(ga_p.artinian(), ga_q.artinian(), k)?));
        let v = check_pm_anisotropy(&ga_p, m / P as usize, k)?;
        anisotropy.push((k, v.label().to_string()));
    }
    let bracket = bracket_degree_check::<P>(ga_q, &ga_p, samples, seed)?;
    Ok(PrimeStage {
        p: P,
        sphere_failure: None,
        dims_p,
        dims_q,
        gorenstein,
        lifted,
        anisotropy,
        bracket: Some(bracket),
    })
}
