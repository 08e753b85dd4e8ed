//! End-to-end behaviour of the `cbap` binary: exit codes, report formats and CSV output.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cbap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbap")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("stdout line is JSON")).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&cbap(&["--help"])), 0);
    assert_eq!(code(&cbap(&["frobnicate"])), 64);
    assert_eq!(code(&cbap(&[])), 64);
    assert_eq!(code(&cbap(&["verify", "lemma-z"])), 64);
    assert_eq!(code(&cbap(&["verify", "blowup"])), 64);
    assert_eq!(code(&cbap(&["suite"])), 64);
}

#[test]
fn verify_emits_one_json_line_per_report() {
    let out = cbap(&["--json", "verify", "lemma-a"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    assert_eq!(r["claim"], "lemma-a");
    assert_eq!(r["pass"], true);
    assert_eq!(r["tolerance"]["kind"], "absolute");
    assert!(r["computed"]["conjugation_residual"].as_f64().unwrap() < 1e-12);
    assert!(r.get("runtime_ms").is_none());
}

#[test]
fn verify_is_deterministic_and_seeded() {
    let a = cbap(&["--json", "--seed", "3", "verify", "lemma-f"]);
    let b = cbap(&["verify", "lemma-f", "--seed", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let c = &json_lines(&cbap(&["--json", "--seed", "4", "verify", "lemma-a"]))[0];
    let d = &json_lines(&cbap(&["--json", "--seed", "5", "verify", "lemma-a"]))[0];
    assert_eq!(c["inputs"]["seed"], 4);
    assert_ne!(c["computed"], d["computed"]);
}

#[test]
fn lemma_b_at_reduced_grid() {
    let out = cbap(&["verify", "lemma-b", "--grid", "512", "--json"]);
    assert_eq!(code(&out), 0);
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert_eq!(r["inputs"]["resolution"], 512);
        let defect = r["computed"]["defect"].as_f64().unwrap();
        assert!((defect - std::f64::consts::PI.powi(2)).abs() < 0.02 * 9.87);
    }
}

#[test]
fn timings_go_to_stderr() {
    let out = cbap(&["--json", "--timings", "verify", "lemma-g"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_lines(&out).len(), 1);
    let timing: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().next().unwrap()).unwrap();
    assert_eq!(timing["claim"], "lemma-g");
    assert!(timing["runtime_ms"].is_u64());
}

#[test]
fn schur_norm_of_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let json = write(dir.path(), "ones3.json", r#"{"rows":3,"cols":3,"re":[1,1,1,1,1,1,1,1,1]}"#);
    let out = cbap(&["--json", "schur-norm", "--matrix", &json]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json_lines(&out)[0];
    assert!((r["computed"]["norm"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(r["computed"]["certificate_verifies"], 1.0);

    let csv = write(dir.path(), "tri.csv", "1,1\n0,1+0j\n");
    let out = cbap(&["--json", "schur-norm", "--matrix", &csv]);
    let norm = json_lines(&out)[0]["computed"]["norm"].as_f64().unwrap();
    assert!((norm - 2.0 / 3f64.sqrt()).abs() < 1e-5, "{norm}");
}

#[test]
fn bad_inputs_are_configuration_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "1,x\n1,1\n");
    assert_eq!(code(&cbap(&["schur-norm", "--matrix", &bad])), 2);
    assert_eq!(code(&cbap(&["schur-norm", "--matrix", "/nonexistent/m.json"])), 2);
    let spec = write(dir.path(), "spec.json", r#"{"group":"Z","kind":"gaussian","sigma":-1}"#);
    assert_eq!(code(&cbap(&["m0a-bound", "--spec", &spec, "--sets", "2"])), 2);
    assert_eq!(code(&cbap(&["blowup", "--rmax", "0.5", "--steps", "3"])), 2);
}

#[test]
fn m0a_bound_reports_a_lower_bound() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "spec.json", r#"{"group":"Z","kind":"gaussian","sigma":1.0}"#);
    let out = cbap(&["--json", "m0a-bound", "--spec", &spec, "--sets", "3", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    let r = &json_lines(&out)[0];
    assert_eq!(r["inputs"]["spec"]["kind"], "gaussian");
    assert_eq!(r["inputs"]["seed"], 9);
    assert!((r["computed"]["lower_bound"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!(r["computed"]["set[2]"].is_f64());
}

#[test]
fn blowup_csv_is_monotone() {
    let out = cbap(&["blowup", "--rmax", "1000", "--steps", "20"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("R,lower_bound"));
    let values: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 20);
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blowup-curve"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = cbap(&["--json", "blowup", "--rmax", "100", "--steps", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 6);
    assert_eq!(json_lines(&out)[0]["claim"], "blowup-curve");
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cbap.conf", "# defaults for CI\njson = true\nseed = 3\n");
    let from_file = cbap(&["--config", &cfg, "verify", "lemma-f"]);
    let from_flags = cbap(&["--json", "--seed", "3", "verify", "lemma-f"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);

    let overridden = cbap(&["--config", &cfg, "--seed", "4", "verify", "lemma-f"]);
    assert_ne!(overridden.stdout, from_file.stdout);

    let bad = write(dir.path(), "bad.conf", "colour = blue\n");
    assert_eq!(code(&cbap(&["--config", &bad, "verify", "lemma-a"])), 2);
}
