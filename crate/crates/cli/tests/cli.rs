use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twistforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistforge"))
        .args(args)
        .env_remove("TWISTFORGE_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn solve_then_verify_from_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("twist.json");
    let cache_s = cache.to_str().unwrap();
    let out = twistforge(&["solve", "--order", "1", "--twist-cache", cache_s]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    assert!(read_json(&cache).is_object());

    let bundle = dir.path().join("bundle.json");
    let out = twistforge(&[
        "verify", "--order", "1", "--cutoff", "3", "--twist-cache", cache_s, "-o",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = twistforge(&["report", bundle.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("qcr"));
}

#[test]
fn failing_check_exits_one() {
    let out = twistforge(&["verify", "--order", "1", "--cutoff", "3", "--convention", "standard", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("qcr"));

    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    std::fs::write(&bundle, &out.stdout).unwrap();
    assert_eq!(twistforge(&["report", bundle.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn errors_exit_two() {
    let out = twistforge(&["report", "/nonexistent/bundle.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("twistforge: "));

    assert_eq!(twistforge(&["build", "--order", "9"]).status.code(), Some(2));
    assert_eq!(twistforge(&["build", "--order", "1", "--alpha", "2 + h"]).status.code(), Some(2));
}

#[test]
fn max_order_can_be_raised_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_twistforge"))
        .args(["solve", "--order", "5", "--cap", "2"])
        .env("TWISTFORGE_MAX_ORDER", "5")
        .output()
        .unwrap();
    // accepted as an order, then rejected by the solver for the tight cap
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree cap 2"));
}

#[test]
fn build_output_is_deterministic() {
    let run = || twistforge(&["build", "--order", "1", "--cutoff", "3", "--alpha", "exp(h*n)"]).stdout;
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"order": 1, "cutoff": 3, "convention": "standard", "format": "json"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(twistforge(&["--config", c, "verify"]).status.code(), Some(1));
    assert_eq!(twistforge(&["--config", c, "verify", "--convention", "mirrored"]).status.code(), Some(0));

    std::fs::write(&cfg, r#"{"order": 1, "bogus": true}"#).unwrap();
    assert_eq!(twistforge(&["--config", c, "verify"]).status.code(), Some(2));
}

#[test]
fn fermi_defaults_to_single_occupancy() {
    let out = twistforge(&["build", "--order", "1", "--statistics", "fermi"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.to_string().contains("fermi"));
}
