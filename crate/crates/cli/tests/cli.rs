use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_lost-at-sea"));
    c.env_remove("ESCAPE_OPTIM_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("lost-at-sea-cli-{}-{name}", std::process::id()))
}

fn curve(name: &str) -> String {
    format!("{}/../../curves/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn optimize_strip2() {
    let v = json_ok(&["optimize", "strip2"]);
    assert_eq!(v["schema_version"], 1);
    assert!((v["params"]["r"].as_f64().unwrap() - 1.04327).abs() < 1e-4);
    assert!((v["params"]["alpha"].as_f64().unwrap() - 1.37349).abs() < 1e-4);
    assert!((v["params"]["alpha_deg"].as_f64().unwrap() - 78.695).abs() < 1e-2);
    assert!((v["value"].as_f64().unwrap() - 0.88697).abs() < 1e-5);
    assert_eq!(v["converged"], true);
}

#[test]
fn optimize_strip3_multistart() {
    let v = json_ok(&["optimize", "strip3", "--multistart", "32", "--seed", "7"]);
    assert!((v["value"].as_f64().unwrap() - 0.88355).abs() < 1e-5);
    assert_eq!(v["seed"], 7);
}

#[test]
fn disk_grid_minimum_at_straight_line() {
    let v = json_ok(&["optimize", "disk2", "--grid"]);
    assert_eq!(v["minimum"]["alpha"].as_f64().unwrap(), PI);
    assert!((v["minimum"]["value"].as_f64().unwrap() - 8.0 / (3.0 * PI)).abs() < 1e-9);
    let csv = run(&["optimize", "disk2", "--grid", "--grid-size", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 17);
}

#[test]
fn starved_optimizer_exits_two() {
    let out = run(&["optimize", "strip2", "--max-evals", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["converged"], false);
}

#[test]
fn evaluate_at_zalgaller_parameters() {
    let closed = json_ok(&["evaluate", "strip2", "--r", "1.3017", "--alpha", "64.3"]);
    let quad = json_ok(&["evaluate", "strip2", "--r", "1.3017", "--alpha", "64.3", "--method", "quad"]);
    let (c, q) = (closed["value"].as_f64().unwrap(), quad["value"].as_f64().unwrap());
    assert!((c - 0.9188).abs() < 5e-4 && (c - q).abs() < 1e-8);
}

#[test]
fn median_of_straight_strip_path() {
    let v = json_ok(&["median", "strip", "--strategy", "straight", "--n", "10000000", "--seed", "1"]);
    assert!((v["estimate"].as_f64().unwrap() - 0.78).abs() <= 0.01);
    assert_eq!(v["n"], 10_000_000);
    assert_eq!(v["seed"], 1);
}

#[test]
fn median_sweep_csv() {
    let out = run(&["median", "disk", "--alpha", "90", "--sweep-r", "0.5,1,2", "--n", "50000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,alpha,alpha_deg,median,ci_half_width,n,seed,failures");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("2,"));
}

#[test]
fn zalgaller_report() {
    let v = json_ok(&["zalgaller"]);
    assert!((v["r"].as_f64().unwrap() - 1.3017).abs() < 1e-3);
    assert!((v["alpha_deg"].as_f64().unwrap() - 64.3).abs() < 0.2);
    assert!((v["expected"].as_f64().unwrap() - 0.9188).abs() < 5e-4);
}

#[test]
fn gevirtz_straight_curve() {
    let v = json_ok(&["gevirtz", "--curve", &curve("straight.curve")]);
    assert!((v["a_gamma"].as_f64().unwrap() - 0.848_826_363).abs() < 1e-9);
    assert!(v["slack"].as_f64().unwrap().abs() < 1e-9);
    let bent = json_ok(&["gevirtz", "--curvature", "0.05"]);
    assert!(bent["slack"].as_f64().unwrap() > 0.0);
}

#[test]
fn gevirtz_rejects_bad_curve_file() {
    let p = scratch("bad.curve");
    std::fs::write(&p, "0 0\n1 2.0\n").unwrap();
    assert_eq!(run(&["gevirtz", "--curve", p.to_str().unwrap()]).status.code(), Some(1));
    std::fs::remove_file(p).ok();
}

#[test]
fn plot_writes_deterministic_svg() {
    let (a, b) = (scratch("a.svg"), scratch("b.svg"));
    for p in [&a, &b] {
        assert_eq!(run(&["plot", "--figure", "6", "--out", p.to_str().unwrap()]).status.code(), Some(0));
    }
    let (sa, sb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(sa, sb);
    assert!(String::from_utf8(sa).unwrap().contains("Case 2'"));
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

#[test]
fn plot_to_unwritable_path() {
    let out = run(&["plot", "--figure", "2", "--out", "/nonexistent-dir/fig.svg"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec!["optimize", "strip9"],
        vec!["evaluate", "strip2", "--r", "1.1"],
        vec!["evaluate", "strip2", "--r", "0.5", "--alpha", "60"],
        vec!["simulate", "strip", "--n", "10"],
        vec!["plot", "--figure", "3"],
        vec!["gevirtz"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn thread_cap() {
    let args = ["simulate", "disk", "--r", "0.7", "--alpha", "120", "--n", "200000", "--seed", "3"];
    let one = bin().env("ESCAPE_OPTIM_THREADS", "1").args(args).output().unwrap();
    let three = bin().env("ESCAPE_OPTIM_THREADS", "3").args(args).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let bad = bin().env("ESCAPE_OPTIM_THREADS", "many").args(args).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn straight_strip_mean_warns() {
    let v = json_ok(&["simulate", "strip", "--strategy", "straight", "--n", "1000000"]);
    assert_eq!(v["heavy_tail"], true);
    assert!(v["warning"].is_string());
}

#[test]
fn paper_check_subset() {
    let out = run(&["paper-check", "--only", "1,3,6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 3);
    let csv = run(&["paper-check", "--only", "6", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("id,passed,seconds,title\n6,true,"));
}

#[test]
fn paper_check_failure_exits_three() {
    // The area-uniform disk median misses its reference value.
    let out = run(&["paper-check", "--only", "7"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout).unwrap().contains("[FAIL] criterion  7"));
}
