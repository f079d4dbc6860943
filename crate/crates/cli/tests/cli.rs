use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invsemi")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert!(doc["config"]["options"].is_object(), "config comes first");
    doc["report"].clone()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invsemi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn green_on_i3() {
    let out = run(&["green", "--family", "I3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["elements"], 34);
    assert_eq!(r["class_counts"]["d"], 4);
    assert_eq!(r["status"]["status"], "complete");
}

#[test]
fn green_csv_has_one_row_per_element() {
    let out = run(&["green", "--family", "I2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 7);
}

#[test]
fn coarse_separates_fim1() {
    let out = run(&["coarse", "--family", "fim1", "--scope", "8", "--scales", "1,2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sparse"]["status"]["status"], "evidence_at_scale");
    assert_eq!(r["sparse"]["status"]["consistent"], true);
    assert_eq!(r["asdim0"]["status"]["status"], "refuted_at_scale");
    assert!(r["asdim0"]["status"]["witness"]["hops"].as_u64().unwrap() >= 8);
}

#[test]
fn embed_verify_reports_isometry() {
    let path = scratch("path.csv", ",a,b,c\na,0,1,2\nb,1,0,1\nc,2,1,0\n");
    let out = run(&["embed", "--input", path.to_str().unwrap(), "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["distortion"]["rho_minus_at_least_r"], true);
    assert_eq!(r["distortion"]["report"]["isometric_pairs"], 9);
}

#[test]
fn roe_decomposes_a_shift() {
    let out = run(&["roe", "--family", "I3", "--element", "[[1,2]]"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["propagation"], 1);
    assert_eq!(r["decomposition"]["residual_operator"], 0.0);
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["green", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--frobnicate"));
    assert_eq!(run(&["metric", "--family", "bicyclic"]).status.code(), Some(2));
    assert_eq!(run(&["green", "--family", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn invalid_space_is_a_usage_error() {
    let bad = scratch("bad.csv", "0,1,3\n1,0,1\n3,1,0\n");
    assert_eq!(run(&["embed", "--input", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--criteria", "1,2,6", "--seed", "5"]);
    let b = run(&["verify", "--criteria", "1,2,6", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["passed"], true);
}

#[test]
fn dot_output_for_graphs() {
    let out = run(&["graph", "--family", "bicyclic", "--scope", "3", "--format", "dot"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));
}
