//! Binary-level tests of the `canon` CLI: exit-code contract, input
//! validation, environment-variable tolerance handling, and output text.
//!
//! Exit codes: 0 = success with residuals within tolerance, 1 = computation
//! finished but residuals exceeded tolerance, 2 = usage or validation error.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn canon_cmd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_canon"));
    // Isolate from any ambient tolerance override.
    cmd.env_remove("CANON_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    canon_cmd().args(args).output().expect("spawn canon binary")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("binary terminated by signal")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

/// Generate an SPD input file with the tool itself; returns its path.
fn gen_spd(dir: &TempDir, n: usize, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("v_{n}_{seed}.json"));
    let out = run(&[
        "gen",
        "spd",
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "-o",
        path_str(&path),
    ]);
    assert_eq!(code(&out), 0, "gen spd failed: {out:?}");
    path
}

fn gen_vectors(dir: &TempDir, n: usize, seed: u64) -> PathBuf {
    let path = dir.path().join(format!("vs_{n}_{seed}.json"));
    let out = run(&[
        "gen",
        "vectors",
        "--n",
        &n.to_string(),
        "--seed",
        &seed.to_string(),
        "-o",
        path_str(&path),
    ]);
    assert_eq!(code(&out), 0, "gen vectors failed: {out:?}");
    path
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = run(&[]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty(), "usage text expected on stderr");
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn invalid_flag_values_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let o = dir.path().join("x.json");
    for args in [
        vec!["gen", "spd", "--n", "0", "--seed", "1", "-o", path_str(&o)],
        vec![
            "gen",
            "spd",
            "--n",
            "3",
            "--cond",
            "0.5",
            "--seed",
            "1",
            "-o",
            path_str(&o),
        ],
        vec![
            "gen",
            "spd",
            "--n",
            "not-a-number",
            "--seed",
            "1",
            "-o",
            path_str(&o),
        ],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 2, "args {args:?} should exit 2: {out:?}");
    }
}

#[test]
fn malformed_json_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ this is not json").unwrap();
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "orthogonal", "-i", path_str(&bad), "-o", path_str(&o)]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn shape_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("shape.json");
    std::fs::write(&bad, r#"{"dim": 3, "field": "real", "data": [1, 2, 3, 4]}"#).unwrap();
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "orthogonal", "-i", path_str(&bad), "-o", path_str(&o)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_input_file_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "orthogonal", "-i", "/nonexistent/v.json", "-o", path_str(&o)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn non_finite_entries_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("inf.json");
    // 1e999 overflows f64; it must be rejected at parse or finiteness check.
    std::fs::write(
        &bad,
        r#"{"dim": 2, "field": "real", "data": [1, 0, 0, 1e999]}"#,
    )
    .unwrap();
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "orthogonal", "-i", path_str(&bad), "-o", path_str(&o)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn williamson_rejects_odd_dimension_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 3, 11);
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "williamson", "-i", path_str(&v), "-o", path_str(&o)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn indefinite_input_rejected_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("indef.json");
    std::fs::write(
        &bad,
        r#"{"dim": 2, "field": "real", "data": [1, 0, 0, -1]}"#,
    )
    .unwrap();
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "williamson", "-i", path_str(&bad), "-o", path_str(&o)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn successful_run_prints_pass_and_exits_0() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 4, 21);
    let o = dir.path().join("out.json");
    let out = run(&["decompose", "orthogonal", "-i", path_str(&v), "-o", path_str(&o)]);
    assert_eq!(code(&out), 0, "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "summary should contain PASS: {stdout}");
}

#[test]
fn canon_tol_env_is_honored() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 4, 33);
    // An impossibly tight tolerance turns rounding noise into a failure.
    let o = dir.path().join("out.json");
    let out = canon_cmd()
        .args(["decompose", "orthogonal", "-i", path_str(&v), "-o", path_str(&o)])
        .env("CANON_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1, "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"), "summary should contain FAIL: {stdout}");
}

#[test]
fn tol_flag_wins_over_canon_tol_env() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 4, 33);
    let o = dir.path().join("out.json");
    let out = canon_cmd()
        .args([
            "decompose",
            "orthogonal",
            "-i",
            path_str(&v),
            "-o",
            path_str(&o),
            "--tol",
            "1e-8",
        ])
        .env("CANON_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn malformed_canon_tol_exits_2() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 2, 5);
    let o = dir.path().join("out.json");
    for bad in ["banana", "-1e-8", "0", "inf"] {
        let out = canon_cmd()
            .args(["decompose", "orthogonal", "-i", path_str(&v), "-o", path_str(&o)])
            .env("CANON_TOL", bad)
            .output()
            .unwrap();
        assert_eq!(code(&out), 2, "CANON_TOL={bad} should exit 2: {out:?}");
    }
}

#[test]
fn decompose_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 6, 44);
    let res = dir.path().join("result.json");
    let out = run(&[
        "decompose",
        "williamson",
        "-i",
        path_str(&v),
        "-o",
        path_str(&res),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let out = run(&["verify", "-r", path_str(&res), "-i", path_str(&v)]);
    assert_eq!(code(&out), 0, "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"), "verify summary: {stdout}");
}

#[test]
fn verify_detects_a_tampered_transformation() {
    let dir = TempDir::new().unwrap();
    let v = gen_spd(&dir, 4, 55);
    let res = dir.path().join("result.json");
    let out = run(&[
        "decompose",
        "orthogonal",
        "-i",
        path_str(&v),
        "-o",
        path_str(&res),
    ]);
    assert_eq!(code(&out), 0);

    // Corrupt one matrix entry of the stored transformation.
    let mut report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    report["outputs"]["s"]["data"][0] = serde_json::json!(3.25);
    std::fs::write(&res, serde_json::to_string_pretty(&report).unwrap()).unwrap();

    let out = run(&["verify", "-r", path_str(&res), "-i", path_str(&v)]);
    assert_eq!(code(&out), 1, "tampered result must fail verification: {out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL"), "verify summary: {stdout}");
}

#[test]
fn basis_with_audit_runs_and_records_the_audit() {
    let dir = TempDir::new().unwrap();
    let vs = gen_vectors(&dir, 4, 66);
    let res = dir.path().join("basis.json");
    let out = run(&[
        "basis",
        "sw",
        "-i",
        path_str(&vs),
        "--audit",
        "5",
        "--seed",
        "3",
        "-o",
        path_str(&res),
    ]);
    assert_eq!(code(&out), 0, "{out:?}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    assert!(report["audit"].is_object(), "audit block expected");
    assert_eq!(report["audit"]["perturbed_quartics"].as_array().unwrap().len(), 5);
    assert_eq!(report["seed"], serde_json::json!(3));
}

#[test]
fn lorentz_basis_partition_must_match_dimension() {
    let dir = TempDir::new().unwrap();
    let vs = gen_vectors(&dir, 4, 77);
    let o = dir.path().join("out.json");
    let out = run(&["basis", "lorentz", "3", "2", "-i", path_str(&vs), "-o", path_str(&o)]);
    assert_eq!(code(&out), 2, "partition 3+2 ≠ 4 must exit 2: {out:?}");
}
