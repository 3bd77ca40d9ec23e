//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use facering::complex::{generators, SimplicialComplex, SimplicialCycle};
use facering::degree::DegreeFunctional;
use facering::reduction::{face_monomials, MomentCurveLsop};
use facering::scalars::FieldKind;
use facering::verify::build_symbolic;
use facering::{Rational, RationalFunction, F2};
use facering_cli::{run, Backend, Command, Example, JobConfig, Outcome, Report};
use serde_json::Value;
use tempfile::TempDir;

type RF<C> = RationalFunction<C>;
type Check = Result<String, String>;

const TRI: &str = "triangle";
const TET: &str = "tetrahedron";
const SIMPLEX4: &str = "simplex4";
const SQUARE: &str = "square";
const OCT: &str = "octahedron";
const RP2: &str = "rp2";

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Suite {
    dir: TempDir,
    jobs: Vec<(JobConfig, Value)>,
}

impl Suite {
    fn new() -> Self {
        let dir = tempfile::tempdir().expect("temp dir");
        let suite = Suite { dir, jobs: Vec::new() };
        for (name, example) in [
            (TRI, Example::SimplexBoundary { d: 2 }),
            (TET, Example::SimplexBoundary { d: 3 }),
            (SIMPLEX4, Example::SimplexBoundary { d: 4 }),
            (SQUARE, Example::CrossPolytope { d: 2 }),
            (OCT, Example::CrossPolytope { d: 3 }),
            (RP2, Example::Rp2),
        ] {
            let out = run(&JobConfig::new(Command::Gen { example }));
            fs::write(suite.path(name), out.text.expect("gen writes text")).expect("write input");
        }
        suite
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(format!("{name}.txt"))
    }

    fn config(&self, name: &str, field: FieldKind, backend: Backend, command: Command) -> JobConfig {
        let mut c = JobConfig::new(command);
        c.input = Some(self.path(name));
        c.field = Some(field);
        c.backend = backend;
        c
    }

    /// Runs a job and records its payload for the determinism check.
    fn job(&mut self, name: &str, field: FieldKind, backend: Backend, command: Command) -> Result<Report, String> {
        let config = self.config(name, field, backend, command);
        let report = run(&config).report;
        if let Some(e) = &report.error {
            return Err(format!("{name}: {}: {e}", config.command.name()));
        }
        self.jobs.push((config, report.payload()));
        Ok(report)
    }
}

fn stage<'a>(report: &'a Report, name: &str) -> Result<&'a Value, String> {
    report
        .stages
        .iter()
        .find(|s| s.name == name)
        .map(|s| &s.result)
        .ok_or_else(|| format!("report has no '{name}' stage"))
}

const Q: FieldKind = FieldKind::Rationals;
const P2: FieldKind = FieldKind::Prime(2);
const P3: FieldKind = FieldKind::Prime(3);

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// h-vector from face counts, computed independently of the library.
fn h_from_f(k: &SimplicialComplex, d: usize) -> Vec<i64> {
    let f: Vec<i64> = (0..=d).map(|i| k.faces_of_size(i).len() as i64).collect();
    (0..=d)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - i, j - i) * f[i]
                })
                .sum()
        })
        .collect()
}

fn as_dims(v: &Value) -> Vec<i64> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_i64).collect()).unwrap_or_default()
}

fn criterion_1(s: &mut Suite) -> Check {
    let cases = [
        (TRI, generators::simplex_boundary(2), 2),
        (TET, generators::simplex_boundary(3), 3),
        (SIMPLEX4, generators::simplex_boundary(4), 4),
        (SQUARE, generators::cross_polytope(2), 2),
        (OCT, generators::cross_polytope(3), 3),
    ];
    for (name, complex, d) in cases {
        let expected: Vec<i64> = if name == SQUARE || name == OCT {
            (0..=d).map(|k| binomial(d, k)).collect()
        } else {
            vec![1; d + 1]
        };
        ensure(h_from_f(&complex, d) == expected, || format!("{name}: f-vector oracle gives {:?}", h_from_f(&complex, d)))?;
        let r = s.job(name, Q, Backend::Both, Command::Artinian { up_to: None })?;
        let exact = as_dims(&stage(&r, "exact")?["dims"]);
        ensure(exact == expected, || format!("{name}: exact dims {exact:?}, expected {expected:?}"))?;
        for run in stage(&r, "evaluated")?["dims"].as_array().into_iter().flatten() {
            let dims = as_dims(run);
            ensure(dims == expected, || format!("{name}: evaluated dims {dims:?}, expected {expected:?}"))?;
        }
        ensure(stage(&r, "backends-agree")?["agree"] == true, || format!("{name}: backends disagree"))?;
        ensure(r.outcome == Outcome::Affirmative, || format!("{name}: outcome {:?}", r.outcome))?;
    }
    Ok("5 complexes, exact and evaluated dims equal the h-vector".into())
}

fn criterion_2(s: &mut Suite) -> Check {
    let mut checked = 0;
    for (name, complex) in [
        (TRI, generators::simplex_boundary(2)),
        (TET, generators::simplex_boundary(3)),
        (OCT, generators::cross_polytope(3)),
    ] {
        let mu = SimplicialCycle::<Rational>::fundamental(&complex).map_err(err)?;
        let ga = build_symbolic(&mu).map_err(err)?;
        let df = ga.degree_functional();
        let n = df.n();
        let t = |j: usize| RF::<Rational>::var(j);
        let two = RF::<Rational>::one() + RF::one();
        let rhos = [t(0) * t(1) + RF::one(), t(n - 1) + two];
        let numeric: Vec<DegreeFunctional<RF<Rational>>> = rhos
            .iter()
            .map(|r| DegreeFunctional::new(&mu, df.lsop().clone(), r.clone()))
            .collect::<facering::Result<_>>()
            .map_err(err)?;
        for m in face_monomials(&complex, mu.d()) {
            let linear = ga.degree_of_monomial(&m).map_err(err)?;
            let lee = df.degree_monomial(&m).map_err(err)?;
            ensure(lee == linear, || format!("{name}: Lee {lee} vs pairing {linear} at {m:?}"))?;
            ensure(!lee.mentions(n), || format!("{name}: degree of {m:?} depends on rho"))?;
            for f in &numeric {
                let v = f.degree_monomial(&m).map_err(err)?;
                ensure(v == linear, || format!("{name}: numeric rho gives {v} at {m:?}"))?;
            }
            checked += 1;
        }
        let r = s.job(name, Q, Backend::Both, Command::Degree)?;
        ensure(r.verdict == "consistent", || format!("{name}: degree command says {}", r.verdict))?;
    }
    Ok(format!("{checked} face monomials agree, rho-free, two numeric rho"))
}

fn criterion_3(_: &mut Suite) -> Check {
    let mut minors = 0;
    for d in 1..=4 {
        for n in d..=7 {
            let lsop = MomentCurveLsop::<RF<Rational>>::symbolic(n, d).map_err(err)?;
            let t = |j: usize| RF::<Rational>::var(j - 1);
            for face in facering::complex::Face::full(n).subsets_of_size(d) {
                let vs = face.to_vec();
                let mut expected = RF::<Rational>::one();
                for &j in &vs {
                    expected = expected * t(j);
                }
                for (a, &i) in vs.iter().enumerate() {
                    for &j in &vs[a + 1..] {
                        expected = expected * (t(j) - t(i));
                    }
                }
                let det = lsop.moment_minor_det(face).map_err(err)?;
                ensure(det == expected, || format!("minor {face} for n = {n}, d = {d}: {det}"))?;
                minors += 1;
            }
        }
    }
    Ok(format!("{minors} minors match the closed form"))
}

fn criterion_4(s: &mut Suite) -> Check {
    for name in [TRI, TET, SIMPLEX4, OCT, RP2] {
        let r = s.job(name, P2, Backend::Exact, Command::Gorenstein { matrices: false })?;
        ensure(r.verdict == "poincare-duality", || format!("{name}: verdict {}", r.verdict))?;
        for entry in stage(&r, "exact")?["degrees"].as_array().into_iter().flatten() {
            ensure(entry["invertible"] == true, || format!("{name}: pairing singular at k = {}", entry["k"]))?;
        }
        let evaluated = r.stages.iter().filter(|st| st.name.starts_with("evaluated-")).count();
        ensure(evaluated == 3, || format!("{name}: {evaluated} evaluation points"))?;
        ensure(stage(&r, "agreement")?["agree"] == true, || format!("{name}: evaluation points disagree"))?;
    }
    Ok("5 complexes over F2(t), certified at 3 points".into())
}

fn criterion_5(_: &mut Suite) -> Check {
    let mut pairs = 0;
    for (name, complex) in [(TET, generators::simplex_boundary(3)), (OCT, generators::cross_polytope(3))] {
        let rational = build_symbolic(&SimplicialCycle::<Rational>::fundamental(&complex).map_err(err)?).map_err(err)?;
        let binary = build_symbolic(&SimplicialCycle::<F2>::fundamental(&complex).map_err(err)?).map_err(err)?;
        let d = rational.d();
        for size in 0..=d {
            for &tau in complex.faces_of_size(size) {
                let m = d - size;
                ensure(rational.annihilator_matches(tau, m).map_err(err)?, || format!("{name} over Q: tau = {tau}"))?;
                ensure(binary.annihilator_matches(tau, m).map_err(err)?, || format!("{name} over F2: tau = {tau}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (tau, m) pairs over Q and F2"))
}

fn anisotropy_suite() -> [(&'static str, FieldKind); 5] {
    [(TRI, P2), (TET, P2), (OCT, P2), (RP2, P2), (OCT, P3)]
}

fn label(field: FieldKind) -> String {
    match field {
        FieldKind::Prime(p) => format!("p={p}"),
        FieldKind::Rationals => "Q".into(),
    }
}

fn criterion_6(s: &mut Suite) -> Check {
    for (name, field) in anisotropy_suite() {
        let r = s.job(name, field, Backend::Exact, Command::Anisotropy { k: 1, samples: 200, certificates: 0 })?;
        ensure(r.verdict == "anisotropic", || format!("{name} {}: verdict {}", label(field), r.verdict))?;
        let samples = stage(&r, "samples")?;
        ensure(samples["samples"] == 200 && samples["vanishing"] == 0, || {
            format!("{name} {}: samples {samples}", label(field))
        })?;
    }
    Ok("5 cases anisotropic, 200 samples each with u^p != 0".into())
}

fn criterion_7(s: &mut Suite) -> Check {
    for (name, field) in anisotropy_suite() {
        let r = s.job(name, field, Backend::Exact, Command::Certificate { k: 1, count: 20 })?;
        ensure(r.verdict == "certified", || format!("{name} {}: verdict {}", label(field), r.verdict))?;
        let confirmed = r.certificates.iter().filter(|c| c["product_nonzero"] == true).count();
        ensure(confirmed == 20, || format!("{name} {}: {confirmed} of 20 confirmed", label(field)))?;
        for c in &r.certificates {
            let cert = &c["certificate"];
            ensure(cert["derivative"] != "0", || format!("{name}: zero derivative recorded"))?;
        }
    }
    Ok("20 certificates per case, each confirmed by multiplication".into())
}

fn criterion_8(s: &mut Suite) -> Check {
    let mut total = 0;
    for (name, field) in anisotropy_suite() {
        let r = s.job(name, field, Backend::Exact, Command::TmCheck)?;
        let tm = stage(&r, "tm")?;
        let partitions = tm["partitions"].as_u64().unwrap_or(0);
        ensure(partitions > 0 && tm["passed"] == partitions, || format!("{name} {}: {tm}", label(field)))?;
        total += partitions;
    }
    Ok(format!("{total} partitions pass"))
}

fn criterion_9(s: &mut Suite) -> Check {
    for name in [TET, SIMPLEX4, OCT] {
        let r = s.job(name, P2, Backend::Exact, Command::Lefschetz { k: None })?;
        ensure(r.verdict == "lefschetz", || format!("{name}: verdict {}", r.verdict))?;
        for result in stage(&r, "exact")?.as_array().into_iter().flatten() {
            let attempts = result["attempts"].as_u64().unwrap_or(u64::MAX);
            ensure(result["iso"] == true && attempts <= 4, || format!("{name}: {result}"))?;
        }
    }
    Ok("all k on 3 complexes, within 3 retries".into())
}

fn criterion_10(s: &mut Suite) -> Check {
    for (name, m) in [(TET, 2), (OCT, 3)] {
        let r = s.job(name, Q, Backend::Exact, Command::RationalAnisotropy { m, samples: 50 })?;
        ensure(r.verdict == "anisotropic", || format!("{name} m = {m}: verdict {}", r.verdict))?;
        let p = m as u64;
        let b = s.job(name, Q, Backend::Exact, Command::BracketCheck { p, samples: 50 })?;
        ensure(b.verdict == "pass", || format!("{name} bracket mod {p}: {}", b.verdict))?;
    }
    let r = s.job(RP2, Q, Backend::Exact, Command::RationalAnisotropy { m: 2, samples: 50 })?;
    ensure(r.verdict == "hypothesis-failure", || format!("rp2: verdict {}", r.verdict))?;
    ensure(r.exit_code == 2, || format!("rp2: exit code {}", r.exit_code))?;
    Ok("tet m=2 and oct m=3 anisotropic, brackets pass, rp2 hypothesis failure".into())
}

fn criterion_11(s: &mut Suite) -> Check {
    let jobs = std::mem::take(&mut s.jobs);
    for (config, payload) in &jobs {
        let again = run(config).report.payload();
        ensure(&again == payload, || format!("{} payload changed on rerun", config.command.name()))?;
    }
    let cache = s.dir.path().join("cache");
    let mut config = s.config(OCT, P2, Backend::Exact, Command::Anisotropy { k: 1, samples: 20, certificates: 5 });
    let plain = run(&config).report;
    config.cache_dir = Some(cache.clone());
    let cold = run(&config).report;
    let warm = run(&config).report;
    ensure(cold.runtime.cache.as_deref() == Some("miss"), || format!("cold run: {:?}", cold.runtime.cache))?;
    ensure(warm.runtime.cache.as_deref() == Some("hit"), || format!("warm run: {:?}", warm.runtime.cache))?;
    ensure(plain.payload() == cold.payload() && cold.payload() == warm.payload(), || {
        "cached runs change the payload".into()
    })?;
    Ok(format!("{} jobs reproduced, cache cold and warm identical", jobs.len()))
}

fn main() -> ExitCode {
    let mut suite = Suite::new();
    let criteria: [(usize, &str, fn(&mut Suite) -> Check); 11] = [
        (1, "dimension oracle", criterion_1),
        (2, "degree consistency", criterion_2),
        (3, "moment minors", criterion_3),
        (4, "poincare duality", criterion_4),
        (5, "annihilators", criterion_5),
        (6, "p-anisotropy", criterion_6),
        (7, "derivative certificates", criterion_7),
        (8, "tm closed form", criterion_8),
        (9, "hard lefschetz", criterion_9),
        (10, "rational pipeline", criterion_10),
        (11, "determinism", criterion_11),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| check(&mut suite)))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} ({name}): {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} ({name}): {why} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
