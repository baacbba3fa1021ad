use std::process::{Command, Output};

use serde_json::Value;

fn wkint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wkint")).args(args).output().expect("failed to run wkint")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not JSON")
}

#[test]
fn compute_c_value() {
    let out = wkint(&["compute", "2,3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["value"], "1015/3888");
    assert_eq!(v["decimal"]["precision"], 30);
}

#[test]
fn compute_other_norms() {
    let v = json_of(&wkint(&["compute", "1,1", "--norm", "int"]));
    assert_eq!(v["value"], "1/24");
    let v = json_of(&wkint(&["compute", "4", "--norm", "chat"]));
    assert_eq!(v["value"], "1");
}

#[test]
fn table_csv() {
    let out = wkint(&["--format", "csv", "table", "--genus", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,c,decimal");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("4,35/144,"));
}

#[test]
fn theta_and_empty_set() {
    let v = json_of(&wkint(&["theta", "--x", "3", "--n", "1"]));
    assert_eq!(v["theta"], "35/144");
    let out = wkint(&["theta", "--x", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty feasible set"));
}

#[test]
fn nesting_is_deterministic() {
    let a = wkint(&["sweep-nesting", "--gmax", "5"]);
    let b = wkint(&["--threads", "1", "sweep-nesting", "--gmax", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["genera"][0]["max"]["c"], "175/648");
}

#[test]
fn checks_pass() {
    assert!(wkint(&["counterexamples"]).status.success());
    assert!(wkint(&["check-identities", "--sample", "10"]).status.success());
    assert!(wkint(&["check-formulas", "--budget", "two=4,three=3,four=2,n=5,ng=1"]).status.success());
    assert!(wkint(&["check-formulas", "--budget", "empty"]).status.success());
}

#[test]
fn bad_budget_is_an_error() {
    assert_eq!(wkint(&["check-formulas", "--budget", "seven=1"]).status.code(), Some(2));
}

#[test]
fn asym_series_and_painleve() {
    let v = json_of(&wkint(&["asym", "series", "--which", "onepoint", "--order", "3"]));
    assert_eq!(v["coefficients"][1], "-17/36");
    let out = wkint(&["painleve", "--gmax", "5"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["genera"][0]["c_g"], "98");
}

#[test]
fn cache_round_trip_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.txt");
    let cache_s = cache.to_str().unwrap();
    assert!(wkint(&["cache", "save", cache_s, "--gmax", "3"]).status.success());
    let v = json_of(&wkint(&["cache", "load", cache_s]));
    assert!(v["entries"].as_u64().unwrap() > 0);

    let out = dir.path().join("r.json");
    let res = wkint(&["--cache", cache_s, "--out", out.to_str().unwrap(), "table", "--genus", "3"]);
    assert!(res.status.success());
    assert!(res.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 11);
}
