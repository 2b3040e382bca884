use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ewlimit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewlimit")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn group_suite_at_iota_passes() {
    let out = ewlimit(&["verify", "group", "--j", "iota", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["status"], "pass");
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["check_name"].as_str().unwrap()).collect();
    assert_eq!(names, ["commutator_table", "group_axioms"]);
    assert!(v["reports"][0].get("duration_ms").is_none());
}

#[test]
fn masses_at_default_triple() {
    let out = ewlimit(&["masses", "--g", "3", "--gp", "4", "--R", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["spectrum"]["m_w"], 3.0);
    assert_eq!(v["spectrum"]["m_z"], 5.0);
    assert_eq!(v["spectrum"]["m_a"], 0.0);
    assert_eq!(v["spectrum"]["exact"]["cos_theta_w"], "3/5");
}

#[test]
fn full_suite_from_config_file() {
    let cfg = scratch("model.json");
    std::fs::write(&cfg, r#"{"g": 5, "gp": 12, "R": 2, "jmode": "iota", "seed": 3, "samples": 20}"#).unwrap();
    let out = ewlimit(&["verify", "all", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["summary"]["total"], 10);
    assert_eq!(v["reports"][2]["mode"], "iota g=5 gp=12 R=2");
}

#[test]
fn flags_override_config_file() {
    let cfg = scratch("override.json");
    std::fs::write(&cfg, r#"{"g": 5, "gp": 12}"#).unwrap();
    let out = ewlimit(&["masses", "--config", cfg.to_str().unwrap(), "--g", "3", "--gp", "4"]);
    assert_eq!(json(&out)["spectrum"]["exact"]["m_z"], "5");
}

#[test]
fn identical_runs_give_identical_bytes() {
    let a = ewlimit(&["verify", "all", "--samples", "30", "--seed", "9"]);
    let b = ewlimit(&["verify", "all", "--samples", "30", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timings_are_opt_in() {
    let out = ewlimit(&["verify", "group", "--samples", "5", "--timings"]);
    assert!(json(&out)["reports"][0].get("duration_ms").is_some());
}

#[test]
fn usage_errors_exit_two() {
    let out = ewlimit(&["verify", "everything"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ewlimit(&["masses", "--g", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`g`"));
    let out = ewlimit(&["verify", "group", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"samples": 0}"#).unwrap();
    let out = ewlimit(&["verify", "group", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`samples`"));
}

#[test]
fn sweep_writes_csv() {
    let path = scratch("sweep.csv");
    let out = ewlimit(&["sweep", "--samples", "10", "--points", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,ratio_f,ratio_h");
    assert_eq!(lines.len(), 4);
}

#[test]
fn eom_reports_decoupling() {
    let out = ewlimit(&["eom"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let z = v["equations"]["Z"].as_str().unwrap();
    assert!(!z.contains("W+") && !z.contains("W-"));
    assert!(v["equations"]["W+"].as_str().unwrap().contains("Z["));
    let one = ewlimit(&["eom", "--j", "1"]);
    assert!(json(&one)["equations"]["Z"].as_str().unwrap().contains("W+"));
}

#[test]
fn numeric_mode_uses_oracle() {
    let out = ewlimit(&["verify", "lagrangian", "--j", "0.01", "--g", "0.652", "--gp", "0.357"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["reports"][0]["decision_path"], "numeric-oracle");
}
