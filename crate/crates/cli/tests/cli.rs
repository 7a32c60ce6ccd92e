use std::path::PathBuf;
use std::process::{Command, Output};

use zpk_cycles::catmap::CensusReport;
use zpk_cycles::dynamics::CycleHistogram;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zpk-cycles"));
    c.env_remove("ZPK_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("zpk-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn analyze_cat_matches_golden() {
    let o = run(&["analyze-cat", "--p", "5", "--k", "2", "--a", "1", "--b", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("analyze_cat_p5_k2_a1_b2.json"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["prediction"]["period"], 15);
    let h: CycleHistogram = serde_json::from_value(v["histogram"].clone()).unwrap();
    assert_eq!(h, CycleHistogram::from_pairs(&[(1, 1), (3, 8), (15, 40)]));
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze-cat", "--p", "7", "--k", "1", "--a", "2", "--b", "3"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn verify_order_reports_theory_and_oracle() {
    let o = run(&["verify-order", "--p", "5", "--k", "3", "--poly", "1 - 4t + t^2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["f", "p", "k", "theory", "oracle", "ks", "pass"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!((v["theory"].as_u64(), v["oracle"].as_u64()), (Some(75), Some(75)));
}

#[test]
fn dot_export_of_small_graph() {
    let o = run(&["enumerate", "--p", "3", "--k", "1", "--a", "1", "--b", "5", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    let nodes = s.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("->")).count();
    let edges = s.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (9, 9));
}

#[test]
fn dot_export_refuses_large_graphs() {
    let o = run(&["enumerate", "--p", "5", "--k", "3", "--a", "1", "--b", "1", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("10000"));
}

#[test]
fn census_csv_and_json() {
    let o = run(&["census", "--p", "5", "--k", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("census_p5_k1.csv"));
    let o = run(&["census", "--p", "7", "--k", "1", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: CensusReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.measured_total, 49);
    // round trip through the library type
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", stdout(&o));
}

#[test]
fn census_mismatch_exits_one() {
    let o = run(&["census", "--p", "5", "--k", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("5,48,24,false"));
}

#[test]
fn usage_and_capacity_errors_exit_two() {
    assert_eq!(run(&["census", "--p", "3", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-order", "--p", "5", "--k", "1", "--poly", "1 + 7t + t^2"]).status.code(), Some(2));
    assert_eq!(run(&["verify-order", "--p", "6", "--k", "1", "--poly", "1 + t"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--p", "5", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["census", "--p", "5", "--k", "1", "--format", "dot"]).status.code(), Some(2));
    let o = run(&["enumerate", "--p", "5", "--k", "3", "--a", "1", "--b", "1", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("15625"));
}

#[test]
fn budget_from_environment_and_config() {
    let o = bin().args(["enumerate", "--p", "5", "--k", "2", "--a", "1", "--b", "1"]).env("ZPK_BUDGET", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let d = tmp("cfg");
    let cfg = d.join("run.conf");
    std::fs::write(&cfg, format!("budget = 10\nout_dir = {}\n", d.join("reports").display())).unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["enumerate", "--p", "5", "--k", "2", "--a", "1", "--b", "1", "--config", c]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["enumerate", "--p", "5", "--k", "1", "--a", "1", "--b", "1", "--config", c, "--budget", "1000", "--out", "h.json"]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(d.join("reports/h.json")).unwrap();
    assert!(written.contains("\"states\": 25"));
}

#[test]
fn graph_checks_and_d_matrix() {
    let o = run(&["verify-graph", "--p", "5", "--k", "2", "--a", "1", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["d-matrix", "--p", "5", "--k", "2", "--a", "1", "--b", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["recursion"]["measured_to"][0], 200);
    let o = run(&["d-matrix", "--p", "5", "--k", "1", "--poly", "2 - 3t + t^2", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("basis [1, 4]"));
}

#[test]
fn analyze_poly_text_and_json() {
    let o = run(&["analyze-poly", "--p", "3", "--k", "4", "--poly", "[1, 1, 1]"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p1"], 3);
    assert_eq!(v["ks"], "Infinite");
    let o = run(&["analyze-poly", "--p", "5", "--k", "2", "--poly", "1 - 3t + t^2", "--format", "text"]);
    assert!(stdout(&o).contains("P_2 = 50"));
}

#[test]
fn companion_enumeration_csv() {
    let o = run(&["enumerate", "--p", "5", "--k", "1", "--poly", "1 + t + t^2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T,count\n1,1\n3,8\n");
}
