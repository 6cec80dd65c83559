//! Drives the installed binary the way a user would.

use std::path::{Path, PathBuf};
use std::process::Command;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_distframe")
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("distframe-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify_builtin_prints_report_json() {
    let out = Command::new(binary())
        .args(["classify", "--map", "fourier", "--n", "16"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["flags"]["gelfand"], true);
    assert_eq!(parsed["M"], 16);
}

#[test]
fn classify_with_explicit_grid_and_tolerance() {
    let out = Command::new(binary())
        .args([
            "classify",
            "--map",
            "delta",
            "--n",
            "16",
            "--grid",
            "trapezoid,400,-12,12",
            "--parseval-tol",
            "1e-8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["flags"]["parseval"], true);
    assert_eq!(parsed["flags"]["mu_independent"], false);
    assert_eq!(parsed["M"], 400);
    assert_eq!(parsed["tolerances"]["parseval_tol"], serde_json::json!(1e-8));
}

#[test]
fn classify_csv_map_roundtrip() {
    // export a builtin through the library, re-classify through the CLI
    use distframe::distmap::{auto_grid, builtin_map, BuiltinKind};
    use distframe::testspace::hermite_space;
    let dir = temp_dir("csv");
    let space = hermite_space(8).unwrap();
    let grid = auto_grid(&space, BuiltinKind::Delta).unwrap();
    let map = builtin_map(BuiltinKind::Delta, &space, &grid).unwrap();
    let csv_path = dir.join("delta.csv");
    std::fs::write(&csv_path, map.to_csv()).unwrap();

    let out = Command::new(binary())
        .args([
            "classify",
            "--map",
            csv_path.to_str().unwrap(),
            "--n",
            "8",
            "--grid",
            "gauss_hermite_lebesgue,8",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["flags"]["gelfand"], true);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sweep_command_flags_unbounded_kernel() {
    let out = Command::new(binary())
        .args(["sweep", "--map", "weighted_fourier", "--sizes", "4,8,16,32"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["unbounded_upper"], true);
    assert_eq!(parsed["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_check_command() {
    let out = Command::new(binary())
        .args(["oracle-check", "--n", "24", "--seed", "5", "--count", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(parsed["max_frame_operator_deviation"].as_f64().unwrap() <= 1e-12);
    assert!(parsed["max_adjoint_identity_error"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn run_command_executes_bundled_scenario() {
    let dir = temp_dir("run");
    let scenario = repo_root().join("scenarios/weighted_fourier_sweep.json");
    let out = Command::new(binary())
        .args(["run", scenario.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("weighted_fourier_sweep.report.json").exists());
    assert!(dir.join("weighted_fourier_sweep.task0.sweep.csv").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn false_flags_are_data_not_errors() {
    // weighted_fourier is nowhere near Parseval; the run must still exit 0
    let out = Command::new(binary())
        .args(["classify", "--map", "weighted_fourier", "--n", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["flags"]["parseval"], false);
}

#[test]
fn unknown_label_gives_nonzero_exit() {
    let dir = temp_dir("badlabel");
    let scenario = dir.join("bad.json");
    std::fs::write(
        &scenario,
        r#"{
            "name": "bad",
            "space": {"basis": "hermite", "n": 4},
            "maps": [],
            "tasks": [{"classify": {"map": "ghost"}}]
        }"#,
    )
    .unwrap();
    let out = Command::new(binary())
        .args(["run", scenario.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("ghost"), "stderr: {stderr}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn malformed_scenario_gives_nonzero_exit() {
    let dir = temp_dir("badjson");
    let scenario = dir.join("bad.json");
    std::fs::write(&scenario, "{ this is not json").unwrap();
    let out = Command::new(binary())
        .args(["run", scenario.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn bad_builtin_name_rejected() {
    let out = Command::new(binary())
        .args(["classify", "--map", "gabor", "--n", "8"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown builtin"));
}
