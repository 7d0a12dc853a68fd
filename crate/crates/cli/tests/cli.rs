use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mlcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlcover")).args(args).output().expect("binary runs")
}

fn suite(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("suite").join(name).display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn exact_on_zero_target() {
    let dir = tempfile::tempdir().unwrap();
    let inst = tmp(&dir, "k0.json");
    let gen = mlcover(&["gen", "--kind", "union-kmst", "--k", "0", "--seed", "3", "--out", inst.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = mlcover(&["solve", "--algo", "exact", "--in", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["cost"], "0/1");
}

#[test]
fn verify_reports_gap() {
    let dir = tempfile::tempdir().unwrap();
    let sol = tmp(&dir, "sol.json");
    let solved = mlcover(&["solve", "--algo", "exact", "--in", &suite("gap-m4.json"), "--out", sol.to_str().unwrap()]);
    assert!(solved.status.success());
    let out = mlcover(&["verify", "--in", &suite("gap-m4.json"), "--solution", sol.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["gap"], "3/2");
    assert_eq!(v["cost_match"], true);
    assert_eq!(v["lp_bound"], "2/1");
}

#[test]
fn envelope_violation_exits_two() {
    // The greedy is suboptimal here, so judging it against the exact
    // envelope must fail.
    let dir = tempfile::tempdir().unwrap();
    let sol = tmp(&dir, "sol.json");
    let inst = suite("union-kmst-s2.json");
    assert!(mlcover(&["solve", "--algo", "greedy", "--in", &inst, "--out", sol.to_str().unwrap()]).status.success());
    let out = mlcover(&["verify", "--in", &inst, "--solution", sol.to_str().unwrap(), "--algo", "exact"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn errors_exit_one() {
    assert_eq!(mlcover(&["solve", "--algo", "nope", "--in", &suite("gap-m4.json")]).status.code(), Some(1));
    assert_eq!(mlcover(&["solve", "--algo", "sci", "--in", &suite("gap-m4.json")]).status.code(), Some(1));
    assert_eq!(mlcover(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(mlcover(&["gen", "--kind", "union-kmst"]).status.code(), Some(1), "seed is mandatory");
    assert_eq!(mlcover(&["--help"]).status.code(), Some(0));
}

#[test]
fn reduce_sources() {
    let sat = json(&mlcover(&["reduce", "--from", "sat", "--in", &suite("inputs/formula.cnf")]));
    assert_eq!((sat["n"].as_u64(), sat["h"].as_u64(), sat["k"].as_u64()), (Some(6), Some(2), Some(4)));
    let sc = json(&mlcover(&["reduce", "--from", "setcover", "--to", "kmfl", "--in", &suite("inputs/setcover.txt")]));
    assert_eq!(sc["kind"], "cover-union");
    let pcst = json(&mlcover(&["reduce", "--from", "pcst", "--in", &suite("inputs/pcst.txt")]));
    assert_eq!(pcst["h"], 2);
    let bip = json(&mlcover(&["reduce", "--from", "bipartite", "--to", "kmst", "--l", "2", "--in", &suite("inputs/bipartite.txt")]));
    assert_eq!(bip["kind"], "intersection-kmst");
    let bad = mlcover(&["reduce", "--from", "bipartite", "--to", "tsp", "--in", &suite("inputs/bipartite.txt")]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn pcst_reduction_matches_brute_force_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let inst = tmp(&dir, "pcst.json");
    assert!(mlcover(&["reduce", "--from", "pcst", "--in", &suite("inputs/pcst.txt"), "--out", inst.to_str().unwrap()]).status.success());
    let out = json(&mlcover(&["solve", "--algo", "exact", "--in", inst.to_str().unwrap()]));
    // Take nodes 1 and 2 (3 for the path), leave node 3 for its prize 2.
    assert_eq!(out["report"]["cost"], "5/1");
}

#[test]
fn bench_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = tmp(&dir, "report.csv");
    let svg = tmp(&dir, "report.svg");
    let out = mlcover(&["bench", "--suite", &suite(""), "--out", csv.to_str().unwrap(), "--plot", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,kind,n,h,k,algorithm,cost,oracle,lp_bound,ratio,envelope,pass,millis,seed"));
    assert!(lines.all(|l| l.contains(",true,")));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn lp_bound_on_gap_instance() {
    let v = json(&mlcover(&["lp-bound", "--in", &suite("gap-m4.json")]));
    assert_eq!(v["objective"], "2/1");
}
