//! Command dispatch: builds the algebras a job needs and records every
//! stage in the report.

use std::fmt::Display;
use std::fs;
use std::marker::PhantomData;
use std::time::Instant;

use facering::complex::{generators, reduced_homology, Face, SimplicialComplex, SimplicialCycle};
use facering::degree::{DegreeFunctional, GorensteinAlgebra};
use facering::reduction::{face_monomials, ArtinianAlgebra, MomentCurveLsop};
use facering::scalars::{BaseField, FieldKind, Monomial};
use num_traits::Zero;
use facering::verify::{
    bracket_degree_check, build_symbolic, check_lefschetz, check_lefschetz_random, check_p_anisotropy,
    check_pm_anisotropy, check_rational_anisotropy, confirm_certificate, derivative_certificate, random_element,
    sample_powers, tm_closed_form_check, tm_partitions, AnisotropyVerdict, RationalVerdict, VerdictResult,
};
use facering::{with_prime, Error, Fp, Rational, RationalFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::config::{Command, Example, JobConfig};
use crate::error::{CliError, CliResult};
use crate::input::{parse_input, render_complex, ComplexInput};
use crate::report::{Outcome, Report};

type RF<C> = RationalFunction<C>;

/// Number of independent points used by the evaluated backend.
pub const EVALUATION_POINTS: usize = 3;

/// Result of a job: the report, plus generated text for `gen`.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub text: Option<String>,
}

pub fn run(config: &JobConfig) -> RunOutput {
    let mut report = Report::new(config);
    let mut text = None;
    if let Err(e) = execute(config, &mut report, &mut text) {
        report.fail(e.to_string());
    }
    RunOutput { report, text }
}

fn execute(config: &JobConfig, report: &mut Report, text: &mut Option<String>) -> CliResult<()> {
    if let Command::Gen { example } = &config.command {
        *text = Some(generate(example, config.field)?);
        report.finish("generated", Outcome::Affirmative);
        return Ok(());
    }
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| Error::Config(format!("'{}' needs an input file", config.command.name())))?;
    let source = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let input = parse_input(&source)?;
    let field = config.field.or(input.field).unwrap_or(FieldKind::Rationals);
    report.input = Some(json!({
        "d": input.d,
        "facets": input.facets.len(),
        "field": field.to_string(),
        "coefficients": input.has_coefficients(),
        "sha256": Cache::key(&[&input.canonical()]),
    }));
    let cache = match &config.cache_dir {
        Some(dir) => Some(Cache::open(dir)?),
        None => None,
    };
    match field {
        FieldKind::Rationals => Job::<Rational>::new(config, &input, field, cache, report).dispatch(),
        FieldKind::Prime(p) => {
            let r: facering::Result<CliResult<()>> =
                with_prime!(p, P => Ok(Job::<Fp<P>>::new(config, &input, field, cache, report).dispatch()));
            r?
        }
    }
}

fn generate(example: &Example, field: Option<FieldKind>) -> CliResult<String> {
    let (complex, comment) = match *example {
        Example::SimplexBoundary { d } => (checked(d >= 1, || generators::simplex_boundary(d))?, format!("boundary of the {d}-simplex")),
        Example::CrossPolytope { d } => (checked(d >= 1, || generators::cross_polytope(d))?, format!("boundary of the {d}-dimensional cross-polytope")),
        Example::CyclicPolytope { n, d } => (
            checked(d >= 2 && n > d, || generators::cyclic_polytope(n, d))?,
            format!("boundary of the cyclic polytope C({n}, {d})"),
        ),
        Example::Rp2 => (generators::rp2(), "six-vertex real projective plane".to_string()),
    };
    let field_kind = field.unwrap_or(FieldKind::Rationals);
    let coefficients = match field_kind {
        FieldKind::Rationals => integer_cycle::<Rational>(&complex, |c| c.to_integer().try_into().ok()),
        FieldKind::Prime(p) => with_prime!(p, P => Ok::<_, Error>(integer_cycle::<Fp<P>>(&complex, |c| Some(c.value() as i64))))?,
    };
    Ok(render_complex(&comment, &complex, field, coefficients.as_deref()))
}

fn checked(ok: bool, f: impl FnOnce() -> SimplicialComplex) -> CliResult<SimplicialComplex> {
    if ok {
        Ok(f())
    } else {
        Err(Error::Domain("generator parameters out of range".into()).into())
    }
}

/// Coefficients of the fundamental cycle in facet order, when it exists.
fn integer_cycle<C: BaseField>(complex: &SimplicialComplex, to_int: impl Fn(&C) -> Option<i64>) -> Option<Vec<i64>> {
    let mu = SimplicialCycle::<C>::fundamental(complex).ok()?;
    complex.facets().iter().map(|f| to_int(&mu.coeff(*f))).collect()
}

fn string<T: Display>(x: &T) -> String {
    x.to_string()
}

fn strings<T: Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(string).collect()
}

fn face_json(f: Face) -> Value {
    json!(f.to_vec())
}

fn faces_json(fs: &[Face]) -> Value {
    Value::Array(fs.iter().map(|f| face_json(*f)).collect())
}

/// `x1^2 x3` style label with vertex numbering.
pub fn monomial_label(m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exps()
        .iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { format!("x{}", i + 1) } else { format!("x{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

fn verdict_outcome<F>(v: &AnisotropyVerdict<F>) -> Outcome {
    match v.result {
        VerdictResult::Anisotropic => Outcome::Affirmative,
        VerdictResult::KernelWitness(_) => Outcome::Refuted,
        VerdictResult::Inconclusive(_) => Outcome::Inconclusive,
    }
}

fn verdict_json<F: Display>(v: &AnisotropyVerdict<F>) -> Value {
    let detail = match &v.result {
        VerdictResult::Anisotropic => Value::Null,
        VerdictResult::KernelWitness(w) => json!(strings(w)),
        VerdictResult::Inconclusive(why) => json!(why),
    };
    json!({
        "mode": v.mode,
        "k": v.k,
        "exponent": v.exponent,
        "verdict": v.label(),
        "detail": detail,
        "stages": v.stages,
    })
}

struct Job<'a, C: BaseField> {
    config: &'a JobConfig,
    input: &'a ComplexInput,
    field: FieldKind,
    cache: Option<Cache>,
    report: &'a mut Report,
    _field: PhantomData<C>,
}

impl<'a, C: BaseField> Job<'a, C> {
    fn new(
        config: &'a JobConfig,
        input: &'a ComplexInput,
        field: FieldKind,
        cache: Option<Cache>,
        report: &'a mut Report,
    ) -> Self {
        Job {
            config,
            input,
            field,
            cache,
            report,
            _field: PhantomData,
        }
    }

    fn dispatch(mut self) -> CliResult<()> {
        match self.config.command.clone() {
            Command::Gen { .. } => unreachable!("handled before parsing input"),
            Command::Homology => self.homology(),
            Command::ConditionStar => self.condition_star(),
            Command::Artinian { up_to } => self.artinian(up_to),
            Command::Degree => self.degree(),
            Command::Gorenstein { matrices } => self.gorenstein(matrices),
            Command::Anisotropy { k, samples, certificates } => self.anisotropy(k, samples, certificates),
            Command::PmAnisotropy { m, k } => self.pm_anisotropy(m, k),
            Command::Certificate { k, count } => self.certificates(k, count),
            Command::TmCheck => self.tm_check(),
            Command::Lefschetz { k } => self.lefschetz(k),
            Command::RationalAnisotropy { m, samples } => self.rational_anisotropy(m, samples),
            Command::BracketCheck { p, samples } => self.bracket_check(p, samples),
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(stream);
        rng
    }

    fn cycle(&mut self) -> CliResult<SimplicialCycle<C>> {
        let start = Instant::now();
        let cycle = self.input.cycle::<C>()?;
        self.report.time("cycle", start);
        Ok(cycle)
    }

    fn require_exact(&self) -> CliResult<()> {
        if self.config.backend.exact() {
            Ok(())
        } else {
            Err(Error::WrongMode(format!(
                "'{}' runs on the exact backend only",
                self.config.command.name()
            ))
            .into())
        }
    }

    fn exact_artinian(&mut self, cycle: &SimplicialCycle<C>, up_to: usize) -> CliResult<ArtinianAlgebra<RF<C>>> {
        let start = Instant::now();
        let lsop = MomentCurveLsop::<RF<C>>::symbolic(cycle.support().n(), cycle.d())?;
        let key = Cache::key(&[
            crate::report::VERSION,
            &self.input.canonical(),
            &self.field.to_string(),
            &format!("{:?}", self.config.backend),
            &self.config.seed.to_string(),
            &up_to.to_string(),
        ]);
        if let Some(cache) = &self.cache {
            if let Some(a) = cache.load::<C>(&key) {
                if a.complex() == &cycle.support() && a.lsop() == &lsop && a.built_degree() == up_to {
                    self.report.runtime.cache = Some("hit".into());
                    self.report.time("build", start);
                    return Ok(a);
                }
            }
        }
        let a = ArtinianAlgebra::build(&cycle.support(), &lsop, up_to)?;
        if let Some(cache) = &self.cache {
            cache.store::<C>(&key, &a)?;
            self.report.runtime.cache = Some("miss".into());
        }
        self.report.time("build", start);
        Ok(a)
    }

    fn exact_gorenstein(&mut self, cycle: &SimplicialCycle<C>) -> CliResult<GorensteinAlgebra<RF<C>>> {
        let a = self.exact_artinian(cycle, cycle.d())?;
        let start = Instant::now();
        let df = DegreeFunctional::symbolic(cycle)?;
        let ga = GorensteinAlgebra::gorensteinify(a, df)?;
        self.report.time("gorensteinify", start);
        Ok(ga)
    }

    /// Parameters and `ρ` at random distinct nonzero points.
    fn evaluation_point(&self, rng: &mut ChaCha8Rng, n: usize) -> (Vec<C::Eval>, C::Eval) {
        let mut pts: Vec<C::Eval> = Vec::with_capacity(n + 1);
        while pts.len() < n + 1 {
            let x = C::random_eval(rng);
            if !pts.contains(&x) {
                pts.push(x);
            }
        }
        let rho = pts.pop().expect("n + 1 points");
        (pts, rho)
    }

    fn evaluated_artinian(
        &self,
        cycle: &SimplicialCycle<C>,
        params: Vec<C::Eval>,
        up_to: usize,
    ) -> CliResult<ArtinianAlgebra<C::Eval>> {
        let lsop = MomentCurveLsop::with_params(cycle.d(), params)?;
        Ok(ArtinianAlgebra::build(&cycle.support(), &lsop, up_to)?)
    }

    fn evaluated_gorenstein(&mut self, cycle: &SimplicialCycle<C>, point: usize) -> CliResult<GorensteinAlgebra<C::Eval>> {
        let start = Instant::now();
        let mut rng = self.rng(1 + point as u64);
        let (params, rho) = self.evaluation_point(&mut rng, cycle.support().n());
        let a = self.evaluated_artinian(cycle, params.clone(), cycle.d())?;
        let df = DegreeFunctional::new(cycle, MomentCurveLsop::with_params(cycle.d(), params)?, rho)?;
        let ga = GorensteinAlgebra::gorensteinify(a, df)?;
        self.report.time("evaluated", start);
        Ok(ga)
    }

    fn homology(&mut self) -> CliResult<()> {
        let start = Instant::now();
        let complex = self.input.complex()?;
        let h = reduced_homology::<C>(&complex);
        let betti: Vec<Value> = h.dims.iter().map(|(i, d)| json!({"degree": i, "dim": d})).collect();
        self.report.stage(
            "homology",
            Outcome::Affirmative,
            json!({
                "n": complex.n(),
                "f_vector": complex.f_vector(),
                "h_vector": complex.h_vector(),
                "euler_characteristic": complex.euler_characteristic(),
                "reduced_homology": betti,
            }),
        );
        let cycle = match self.input.cycle::<C>() {
            Ok(mu) => json!({
                "faces": mu.coeffs().iter().map(|(f, c)| json!({"face": face_json(*f), "coefficient": string(c)})).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        self.report.stage("cycle", Outcome::Affirmative, cycle);
        self.report.time("homology", start);
        self.report.finish("computed", Outcome::Affirmative);
        Ok(())
    }

    fn condition_star(&mut self) -> CliResult<()> {
        let cycle = self.cycle()?;
        let start = Instant::now();
        let r = cycle.check_condition_star()?;
        let entries: Vec<Value> = r
            .entries
            .iter()
            .map(|e| json!({"face": face_json(e.face), "degree": e.degree, "dim": e.dim, "passed": e.passed}))
            .collect();
        let failure = r
            .first_failure
            .as_ref()
            .map(|f| json!({"face": face_json(f.face), "degree": f.degree, "dim": f.dim}));
        let outcome = if r.passed() { Outcome::Affirmative } else { Outcome::Refuted };
        self.report.stage(
            "condition-star",
            outcome,
            json!({"entries": entries, "first_failure": failure, "components": r.components}),
        );
        self.report.time("condition-star", start);
        self.report.finish(if r.passed() { "pass" } else { "fail" }, outcome);
        Ok(())
    }

    fn artinian(&mut self, up_to: Option<usize>) -> CliResult<()> {
        let cycle = self.cycle()?;
        let d = cycle.d();
        let up_to = up_to.unwrap_or(d).min(d);
        let support = cycle.support();
        let h = support.h_vector();
        let mut outcome = Outcome::Affirmative;
        let mut exact_dims = None;
        if self.config.backend.exact() {
            let a = self.exact_artinian(&cycle, up_to)?;
            let dims = a.dims();
            let bases: Vec<Value> = (0..=up_to)
                .map(|k| {
                    let piece = a.piece(k).expect("built");
                    json!(piece.basis_monomials().iter().map(|m| monomial_label(m)).collect::<Vec<_>>())
                })
                .collect();
            self.report.stage("exact", Outcome::Affirmative, json!({"dims": dims, "bases": bases}));
            exact_dims = Some(dims);
        }
        if self.config.backend.evaluated() {
            let start = Instant::now();
            let mut runs = Vec::new();
            for i in 0..EVALUATION_POINTS {
                let mut rng = self.rng(1 + i as u64);
                let (params, _) = self.evaluation_point(&mut rng, support.n());
                runs.push(self.evaluated_artinian(&cycle, params, up_to)?.dims());
            }
            let agree = runs.windows(2).all(|w| w[0] == w[1]);
            let stage_outcome = if agree { Outcome::Affirmative } else { Outcome::Inconclusive };
            outcome = outcome.combine(stage_outcome);
            self.report.stage("evaluated", stage_outcome, json!({"dims": runs, "agree": agree}));
            if let Some(exact) = &exact_dims {
                let same = &runs[0] == exact;
                let o = if same { Outcome::Affirmative } else { Outcome::Inconclusive };
                outcome = outcome.combine(o);
                self.report.stage("backends-agree", o, json!({"agree": same}));
            }
            exact_dims.get_or_insert(runs[0].clone());
            self.report.time("evaluated", start);
        }
        let dims = exact_dims.expect("some backend ran");
        let matches_h = dims.iter().enumerate().all(|(k, &x)| h.get(k).copied() == Some(x as i64));
        self.report
            .stage("h-vector", Outcome::Affirmative, json!({"h_vector": h, "matches": matches_h}));
        self.report.finish("computed", outcome);
        Ok(())
    }

    fn degree(&mut self) -> CliResult<()> {
        let cycle = self.cycle()?;
        let d = cycle.d();
        let mut outcome = Outcome::Affirmative;
        let monomials = face_monomials(&cycle.support(), d);
        if self.config.backend.exact() {
            let ga = self.exact_gorenstein(&cycle)?;
            let start = Instant::now();
            let df = ga.degree_functional();
            let n = df.n();
            let t = |j: usize| RF::<C>::var(j);
            let rhos = [t(0) * t(0) + RF::one(), t(0) + t(n - 1) * t(n - 1)];
            let numeric: Vec<DegreeFunctional<RF<C>>> = rhos
                .iter()
                .map(|r| DegreeFunctional::new(&cycle, df.lsop().clone(), r.clone()))
                .collect::<facering::Result<_>>()?;
            let mut table = Vec::with_capacity(monomials.len());
            let mut mismatches = Vec::new();
            for m in &monomials {
                let linear = ga.degree_of_monomial(m)?;
                let lee = df.degree_monomial(m)?;
                let r_free = !lee.mentions(n);
                let specialized: Vec<RF<C>> = numeric.iter().map(|f| f.degree_monomial(m)).collect::<facering::Result<_>>()?;
                let ok = lee == linear && r_free && specialized.iter().all(|v| v == &linear);
                if !ok {
                    mismatches.push(monomial_label(m));
                }
                table.push(json!({"monomial": monomial_label(m), "degree": string(&linear), "agree": ok}));
            }
            let o = if mismatches.is_empty() { Outcome::Affirmative } else { Outcome::Refuted };
            outcome = outcome.combine(o);
            self.report.stage(
                "exact",
                o,
                json!({"monomials": monomials.len(), "mismatches": mismatches, "table": table, "rho_choices": strings(&rhos)}),
            );
            self.report.time("degree", start);
        }
        if self.config.backend.evaluated() {
            for i in 0..EVALUATION_POINTS {
                let ga = self.evaluated_gorenstein(&cycle, i)?;
                let df = ga.degree_functional();
                let mut mismatches = Vec::new();
                for m in &monomials {
                    if ga.degree_of_monomial(m)? != df.degree_monomial(m)? {
                        mismatches.push(monomial_label(m));
                    }
                }
                let o = if mismatches.is_empty() { Outcome::Affirmative } else { Outcome::Refuted };
                outcome = outcome.combine(o);
                self.report.stage(format!("evaluated-{i}"), o, json!({"mismatches": mismatches}));
            }
        }
        let label = if outcome == Outcome::Affirmative { "consistent" } else { "inconsistent" };
        self.report.finish(label, outcome);
        Ok(())
    }

    fn gorenstein(&mut self, matrices: bool) -> CliResult<()> {
        let cycle = self.cycle()?;
        let d = cycle.d();
        let mut outcome = Outcome::Affirmative;
        let mut dims_seen = Vec::new();
        if self.config.backend.exact() {
            let ga = self.exact_gorenstein(&cycle)?;
            let start = Instant::now();
            let mut degrees = Vec::new();
            for k in 0..=d {
                let pairing = ga.pairing_matrix(k)?;
                let rank = pairing.rank();
                let invertible = rank == ga.dim(k) && ga.dim(k) == ga.dim(d - k);
                if !invertible {
                    outcome = Outcome::Refuted;
                }
                let mut entry = json!({
                    "k": k,
                    "dim_a": ga.artinian().piece(k)?.dim(),
                    "dim_b": ga.dim(k),
                    "basis": faces_json(ga.basis(k)?),
                    "pairing_rank": rank,
                    "invertible": invertible,
                });
                if matrices {
                    let rows: Vec<Vec<String>> = (0..pairing.rows()).map(|r| strings(pairing.row(r))).collect();
                    entry["pairing"] = json!(rows);
                }
                degrees.push(entry);
            }
            dims_seen.push(ga.dims());
            self.report.stage("exact", outcome, json!({"degrees": degrees}));
            self.report.time("pairing", start);
        }
        let evaluations = if self.config.backend.evaluated() || self.config.backend.exact() {
            EVALUATION_POINTS
        } else {
            0
        };
        for i in 0..evaluations {
            let ga = self.evaluated_gorenstein(&cycle, i)?;
            let ranks: Vec<usize> = (0..=d).map(|k| ga.pairing_matrix(k).map(|m| m.rank())).collect::<facering::Result<_>>()?;
            let ok = ranks.iter().enumerate().all(|(k, &r)| r == ga.dim(k) && ga.dim(k) == ga.dim(d - k));
            let o = if ok { Outcome::Affirmative } else { Outcome::Inconclusive };
            outcome = outcome.combine(o);
            dims_seen.push(ga.dims());
            self.report
                .stage(format!("evaluated-{i}"), o, json!({"dims": ga.dims(), "pairing_ranks": ranks}));
        }
        let agree = dims_seen.windows(2).all(|w| w[0] == w[1]);
        let o = if agree { Outcome::Affirmative } else { Outcome::Inconclusive };
        outcome = outcome.combine(o);
        self.report.stage("agreement", o, json!({"dims": dims_seen[0], "agree": agree}));
        let label = if outcome == Outcome::Affirmative { "poincare-duality" } else { "degenerate" };
        self.report.finish(label, outcome);
        Ok(())
    }

    fn anisotropy(&mut self, k: usize, samples: usize, certificates: usize) -> CliResult<()> {
        self.require_exact()?;
        let cycle = self.cycle()?;
        let ga = self.exact_gorenstein(&cycle)?;
        let p = C::characteristic() as usize;
        let start = Instant::now();
        let v = check_p_anisotropy(&ga, k)?;
        self.report.time("semilinear", start);
        let mut outcome = verdict_outcome(&v);
        self.report.stage("semilinear", outcome, verdict_json(&v));
        if let VerdictResult::KernelWitness(w) = &v.result {
            let vanishes = ga.power(k, w, p)?.iter().all(|x| x.is_zero());
            if !vanishes {
                outcome = Outcome::Error;
            }
            self.report.certificates.push(json!({
                "kind": "kernel-witness",
                "k": k,
                "exponent": p,
                "basis": faces_json(ga.basis(k)?),
                "coordinates": strings(w),
                "power_vanishes": vanishes,
            }));
        }
        if samples > 0 {
            let start = Instant::now();
            let s = sample_powers(&ga, k, p, samples, self.config.seed)?;
            let o = if s.vanishing == 0 { Outcome::Affirmative } else { Outcome::Refuted };
            if outcome == Outcome::Affirmative && s.vanishing > 0 {
                outcome = Outcome::Error;
            }
            self.report.stage("samples", o, json!(s));
            self.report.time("samples", start);
        }
        if v.is_anisotropic() && certificates > 0 && p * k <= ga.d() {
            let found = self.collect_certificates(&ga, k, certificates)?;
            if found < certificates {
                outcome = outcome.combine(Outcome::Inconclusive);
            }
        }
        if outcome == Outcome::Error {
            self.report.fail("exact verdict and direct multiplication disagree".into());
        } else {
            self.report.finish(v.label(), outcome);
        }
        Ok(())
    }

    /// Derivative certificates for seeded random `u`, each confirmed by
    /// multiplying out `x_ι u^p`.
    fn collect_certificates(&mut self, ga: &GorensteinAlgebra<RF<C>>, k: usize, count: usize) -> CliResult<usize> {
        let start = Instant::now();
        let mut rng = self.rng(100);
        let mut found = 0;
        for i in 0..count {
            let u = random_element(ga, k, &mut rng);
            let seed = self.config.seed.wrapping_add(i as u64);
            match derivative_certificate(ga, k, &u, seed)? {
                Some(cert) => {
                    let confirmed = confirm_certificate(ga, k, &u, &cert, seed)?;
                    if confirmed {
                        found += 1;
                    }
                    self.report.certificates.push(json!({
                        "kind": "derivative",
                        "sample": i,
                        "u": strings(&u),
                        "certificate": cert,
                        "product_nonzero": confirmed,
                    }));
                }
                None => self.report.certificates.push(json!({
                    "kind": "derivative",
                    "sample": i,
                    "u": strings(&u),
                    "certificate": Value::Null,
                })),
            }
        }
        let o = if found == count { Outcome::Affirmative } else { Outcome::Inconclusive };
        self.report.stage("certificates", o, json!({"requested": count, "confirmed": found}));
        self.report.time("certificates", start);
        Ok(found)
    }

    fn pm_anisotropy(&mut self, m: usize, k: usize) -> CliResult<()> {
        self.require_exact()?;
        let cycle = self.cycle()?;
        let ga = self.exact_gorenstein(&cycle)?;
        let start = Instant::now();
        let v = check_pm_anisotropy(&ga, m, k)?;
        self.report.time("descent", start);
        let outcome = verdict_outcome(&v);
        self.report.stage("descent", outcome, verdict_json(&v));
        if let VerdictResult::KernelWitness(w) = &v.result {
            self.report.certificates.push(json!({
                "kind": "kernel-witness",
                "k": k,
                "exponent": v.exponent,
                "basis": faces_json(ga.basis(k)?),
                "coordinates": strings(w),
            }));
        }
        self.report.finish(v.label(), outcome);
        Ok(())
    }

    fn certificates(&mut self, k: usize, count: usize) -> CliResult<()> {
        self.require_exact()?;
        let cycle = self.cycle()?;
        let ga = self.exact_gorenstein(&cycle)?;
        let p = C::characteristic() as usize;
        if p == 0 {
            return Err(Error::WrongMode("certificates need a field of positive characteristic".into()).into());
        }
        if p * k > ga.d() {
            return Err(Error::Range { degree: p * k, built: ga.d() }.into());
        }
        let found = self.collect_certificates(&ga, k, count)?;
        let outcome = if found == count { Outcome::Affirmative } else { Outcome::Inconclusive };
        self.report.finish(if found == count { "certified" } else { "incomplete" }, outcome);
        Ok(())
    }

    fn tm_check(&mut self) -> CliResult<()> {
        let p = C::characteristic() as usize;
        if p == 0 {
            return Err(Error::WrongMode("tm-check needs a field of positive characteristic".into()).into());
        }
        let cycle = self.cycle()?;
        let start = Instant::now();
        let df = DegreeFunctional::symbolic(&cycle)?;
        let facets: Vec<Face> = df.coefficients().keys().copied().collect();
        let mut total = 0;
        let mut passed = 0;
        let mut literal = 0;
        let mut failures = Vec::new();
        for k in 1..=cycle.d() / p {
            for (f, xi, sigma, iota) in tm_partitions(&facets, p, k) {
                let c = tm_closed_form_check(&df, f, xi, sigma, iota)?;
                total += 1;
                if c.passes {
                    passed += 1;
                } else {
                    failures.push(json!({
                        "facet": face_json(f), "xi": face_json(xi), "sigma": face_json(sigma), "iota": face_json(iota),
                        "tm": string(&c.tm), "closed_form": string(&c.closed_form),
                    }));
                }
                if c.reduced_passes {
                    literal += 1;
                }
            }
        }
        let outcome = if passed == total { Outcome::Affirmative } else { Outcome::Refuted };
        self.report.stage(
            "tm",
            outcome,
            json!({"partitions": total, "passed": passed, "literal_form_passed": literal, "failures": failures}),
        );
        self.report.time("tm", start);
        self.report.finish(if passed == total { "pass" } else { "fail" }, outcome);
        Ok(())
    }

    fn lefschetz(&mut self, k: Option<usize>) -> CliResult<()> {
        let cycle = self.cycle()?;
        let d = cycle.d();
        let ks: Vec<usize> = match k {
            Some(k) if 2 * k > d => return Err(Error::Range { degree: 2 * k, built: d }.into()),
            Some(k) => vec![k],
            None => (0..=d / 2).collect(),
        };
        let mut outcome = Outcome::Affirmative;
        if self.config.backend.exact() {
            let ga = self.exact_gorenstein(&cycle)?;
            let start = Instant::now();
            let mut results = Vec::new();
            for &k in &ks {
                let r = check_lefschetz_random(&ga, k, self.config.seed, self.config.retries)?;
                if !r.iso {
                    outcome = Outcome::Inconclusive;
                }
                results.push(r);
            }
            let o = if results.iter().all(|r| r.iso) { Outcome::Affirmative } else { Outcome::Inconclusive };
            self.report.stage("exact", o, json!(results));
            self.report.time("lefschetz", start);
        }
        if self.config.backend.evaluated() {
            let mut results = Vec::new();
            for i in 0..EVALUATION_POINTS {
                let ga = self.evaluated_gorenstein(&cycle, i)?;
                let mut rng = self.rng(200 + i as u64);
                for &k in &ks {
                    let mut last = None;
                    for attempt in 0..=self.config.retries {
                        let ell: Vec<C::Eval> = (0..ga.degree_functional().n()).map(|_| C::random_eval(&mut rng)).collect();
                        let mut r = check_lefschetz(&ga, &ell, k)?;
                        r.attempts = attempt + 1;
                        let iso = r.iso;
                        last = Some(r);
                        if iso {
                            break;
                        }
                    }
                    let r = last.expect("at least one attempt");
                    if !r.iso {
                        outcome = Outcome::Inconclusive;
                    }
                    results.push(json!({"point": i, "result": r}));
                }
            }
            self.report.stage("evaluated", outcome, json!(results));
        }
        self.report.finish(if outcome == Outcome::Affirmative { "lefschetz" } else { "rank-deficient" }, outcome);
        Ok(())
    }

    fn rational_anisotropy(&mut self, m: usize, samples: usize) -> CliResult<()> {
        self.require_exact()?;
        if C::characteristic() != 0 {
            return Err(Error::WrongMode("the rational pipeline runs over Q; use 'pm-anisotropy' over F_p".into()).into());
        }
        let complex = self.input.complex()?;
        let start = Instant::now();
        let r = check_rational_anisotropy(&complex, m, samples, self.config.seed)?;
        self.report.time("pipeline", start);
        let (label, outcome) = match &r.verdict {
            RationalVerdict::Anisotropic => ("anisotropic", Outcome::Affirmative),
            RationalVerdict::HypothesisFailure { .. } => ("hypothesis-failure", Outcome::Inconclusive),
            RationalVerdict::Inconclusive(_) => ("inconclusive", Outcome::Inconclusive),
        };
        for stage in &r.stages {
            self.report.stage(format!("prime-{}", stage.p), outcome, json!(stage));
        }
        self.report.stage("verdict", outcome, json!(r.verdict));
        self.report.finish(label, outcome);
        Ok(())
    }

    fn bracket_check(&mut self, p: u64, samples: usize) -> CliResult<()> {
        self.require_exact()?;
        if C::characteristic() != 0 {
            return Err(Error::WrongMode("bracket-check takes the cycle over Q and reduces it mod p".into()).into());
        }
        let cycle = self.input.cycle::<Rational>()?;
        let start = Instant::now();
        let report: facering::Result<CliResult<BracketOutcome>> =
            with_prime!(p, P => Ok(bracket::<P>(&cycle, samples, self.config.seed)));
        let report = report??;
        self.report.time("bracket", start);
        let outcome = if report.passed { Outcome::Affirmative } else { Outcome::Refuted };
        self.report.stage("bracket", outcome, report.detail);
        self.report.finish(if report.passed { "pass" } else { "fail" }, outcome);
        Ok(())
    }
}

struct BracketOutcome {
    passed: bool,
    detail: Value,
}

fn bracket<const P: u64>(cycle: &SimplicialCycle<Rational>, samples: usize, seed: u64) -> CliResult<BracketOutcome> {
    let ga_q = build_symbolic(cycle)?;
    let ga_p = build_symbolic(&cycle.reduce::<P>()?)?;
    let r = bracket_degree_check::<P>(&ga_q, &ga_p, samples, seed)?;
    Ok(BracketOutcome {
        passed: r.passed(),
        detail: json!(r),
    })
}
