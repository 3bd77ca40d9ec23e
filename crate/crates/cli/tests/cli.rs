use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FIGURE_EIGHT: &str = "\
# two triangles glued at vertex 1
dim 2
1 2 : 1
2 3 : 1
3 1 : 1
1 4 : 1
4 5 : 1
5 1 : 1
";

fn facering(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_facering"))
        .args(args)
        .current_dir(dir)
        .env_remove("FACERING_SEED")
        .env_remove("FACERING_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn gen(dir: &Path, name: &str, example: &[&str]) {
    let mut args = vec!["gen"];
    args.extend_from_slice(example);
    let out = facering(&args, dir);
    assert_eq!(out.status.code(), Some(0));
    fs::write(dir.join(name), &out.stdout).unwrap();
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    gen(dir.path(), "tri.txt", &["simplex-boundary", "2"]);
    gen(dir.path(), "oct.txt", &["cross-polytope", "3"]);
    gen(dir.path(), "rp2.txt", &["rp2"]);
    fs::write(dir.path().join("eight.txt"), FIGURE_EIGHT).unwrap();
    dir
}

#[test]
fn help_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(facering(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(facering(&["--version"], dir.path()).status.code(), Some(0));
    assert_eq!(facering(&["frobnicate"], dir.path()).status.code(), Some(3));
    assert_eq!(facering(&["anisotropy", "x.txt"], dir.path()).status.code(), Some(3));
    let conflict = facering(&["anisotropy", "--field", "3", "--p", "2", "--k", "1", "x.txt"], dir.path());
    assert_eq!(conflict.status.code(), Some(3));
}

#[test]
fn homology_of_generated_complex() {
    let dir = workspace();
    let out = facering(&["homology", "oct.txt"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verdict"], "computed");
    assert_eq!(report["input"]["facets"], 8);
    assert_eq!(report["exit_code"], 0);
}

#[test]
fn pinched_cycle_fails_condition_star() {
    let dir = workspace();
    let out = facering(&["condition-star", "eight.txt"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["verdict"], "fail");
    let failure = &report["stages"][0]["result"]["first_failure"];
    assert_eq!(failure["face"], serde_json::json!([1]));
    assert_eq!(failure["dim"], 3);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = workspace();
    fs::write(dir.path().join("bad.txt"), "dim 2\n1 2\n2 x\n").unwrap();
    let out = facering(&["homology", "bad.txt"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let report = json(&out);
    assert!(report["error"].as_str().unwrap().contains("line 3"), "{}", report["error"]);
    let missing = facering(&["homology", "nope.txt"], dir.path());
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn non_cycle_is_an_error() {
    let dir = workspace();
    fs::write(dir.path().join("path.txt"), "dim 2\n1 2 : 1\n2 3 : 1\n").unwrap();
    let out = facering(&["gorenstein", "path.txt"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a cycle"));
}

#[test]
fn exit_codes_follow_the_verdict() {
    let dir = workspace();
    let ok = facering(&["anisotropy", "--p", "2", "--k", "1", "--samples", "20", "--certificates", "3", "rp2.txt"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verdict"], "anisotropic");
    let failure = facering(&["rational-anisotropy", "--m", "2", "--samples", "5", "rp2.txt"], dir.path());
    assert_eq!(failure.status.code(), Some(2));
    assert_eq!(json(&failure)["verdict"], "hypothesis-failure");
}

#[test]
fn reports_are_reproducible() {
    let dir = workspace();
    let args = ["--no-timings", "anisotropy", "--p", "2", "--k", "1", "--samples", "30", "--certificates", "4", "oct.txt"];
    let a = facering(&args, dir.path());
    let b = facering(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other_seed = facering(&[&["--seed", "9"], &args[..]].concat(), dir.path());
    assert_ne!(json(&a)["certificates"], json(&other_seed)["certificates"]);
    assert_eq!(json(&a)["verdict"], json(&other_seed)["verdict"]);
}

#[test]
fn cache_and_output_file() {
    let dir = workspace();
    let args = ["--cache-dir", "cache", "-o", "report.json", "gorenstein", "--field", "2", "tri.txt"];
    assert_eq!(facering(&args, dir.path()).status.code(), Some(0));
    let cold: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(facering(&args, dir.path()).status.code(), Some(0));
    let warm: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(cold["runtime"]["cache"], "miss");
    assert_eq!(warm["runtime"]["cache"], "hit");
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("runtime");
        v
    };
    assert_eq!(strip(cold), strip(warm));
    assert!(fs::read_dir(dir.path().join("cache")).unwrap().count() > 0);
}
