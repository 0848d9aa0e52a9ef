use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mnv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mnv")).args(args).output().expect("run mnv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().rev().find(|l| l.starts_with('{')).expect("json error line");
    serde_json::from_str(line).unwrap()
}

#[test]
fn field_grid_at_blow_up_time() {
    let o = mnv(&["field", "--C", "0.7", "--t", "0.7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,t,U,ReV,ImV");
    assert_eq!(lines.len(), 10);
    assert!(lines[5].ends_with("nan,nan,nan"), "{}", lines[5]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let u = |row: &str| row.split(',').nth(3).unwrap().parse::<f64>().unwrap();
    assert!((u(lines[6]) + 12.0 / 13.0).abs() < 1e-14);
    assert!((u(lines[2]) - 12.0 / 13.0).abs() < 1e-14);
}

#[test]
fn field_output_is_deterministic() {
    let args = ["field", "--C", "0.2", "--t", "-0.3", "--t", "1.1", "--grid", "-2,2,-2,2,9,7"];
    let (a, b) = (mnv(&args), mnv(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1 + 2 * 63);
}

#[test]
fn conserve_passes_for_enneper() {
    let o = mnv(&["conserve", "--C", "0.7", "--t", "-0.3", "--t", "0.7", "--t", "1.7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!((rows[1]["value"].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-3);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-3);
}

#[test]
fn verify_smooth_points() {
    let o = mnv(&["verify", "--C", "0.7", "--t", "0.4", "--grid", "0.5,1,0.5,1,2,2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert!(v["summary"]["min_order"].as_f64().unwrap() >= 1.7);
    assert!(v["summary"]["max_residual"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn verify_skips_blow_up_point() {
    let o = mnv(&["verify", "--C", "0.7", "--t", "0.7"]);
    let v = json(&o);
    assert_eq!(v["skipped"].as_array().unwrap().len(), 1);
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_failing_threshold_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"C": 0.7, "times": [0.4], "thresholds": {"max_residual": 1e-12}}"#).unwrap();
    let o = mnv(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["passed"], false);
    assert_eq!(stderr_json(&o)["error"], "AcceptanceFailure");
}

#[test]
fn verify_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("samples.csv");
    let csv = csv.to_str().unwrap();
    let common = ["--C", "0.7", "--t", "1.2", "--grid", "0.3,0.9,-0.6,0.6,2,2"];
    let mut dump = vec!["verify", "--dump-csv", csv];
    dump.extend(common);
    let mut read = vec!["verify", "--from-csv", csv];
    read.extend(common);
    let (a, b) = (mnv(&dump), mnv(&read));
    assert!(a.status.success() && b.status.success());
    assert_eq!(json(&a), json(&b));
}

#[test]
fn surface_mesh_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("enneper.obj");
    let o = mnv(&["surface", "--grid", "-1,1,-1,1,32,32", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 1024);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 1922);
}

#[test]
fn inverted_mesh_reports_degenerate_vertex() {
    let o = mnv(&["invert", "--C", "0.7"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("1 degenerate"), "{err}");
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("v ")).count(), 9);
}

#[test]
fn custom_spinor_from_flags() {
    let o = mnv(&["field", "--spinor-p", "0:0,0:0,1:0", "--spinor-q", "1:0", "--t", "0.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 10);
}

#[test]
fn invalid_input_exits_1() {
    for args in [
        vec!["field", "--grid", "1,0,0,1,3,3"],
        vec!["field", "--spinor-p", "0:0", "--spinor-q", "0:0"],
        vec!["field", "--tol", "abc"],
        vec!["bogus"],
    ] {
        let o = mnv(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_json(&o)["exit_code"], 1);
    }
}

#[test]
fn io_error_exits_3() {
    let o = mnv(&["field", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let o = mnv(&["conserve", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!Path::new("/nonexistent/dir/out.csv").exists());
}

#[test]
fn help_exits_0() {
    assert!(mnv(&["--help"]).status.success());
}
