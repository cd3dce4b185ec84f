use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverkit")).args(args).output().expect("spawn quiverkit")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_owned()
}

#[test]
fn counts() {
    assert_eq!(stdout(&["count", "--graph", &fixture("nilpotent_dag.json"), "--k", "2", "--engine", "both"]), "15");
    assert_eq!(stdout(&["count", "--graph", &fixture("twin_loops.json"), "--k", "6"]), "128");
    let empty = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(empty.path(), r#"{"vertices":[],"edges":[]}"#).unwrap();
    assert_eq!(stdout(&["count", "--graph", empty.path().to_str().unwrap(), "--k", "1"]), "0");
}

#[test]
fn bound_and_search() {
    assert_eq!(stdout(&["bound", "--n", "16", "--k", "3"]), "150 = 6^1 * 5^2");
    let v: serde_json::Value = serde_json::from_str(&stdout(&["search", "--n", "4", "--k", "4"])).unwrap();
    assert_eq!(v["max"], "1");
}

#[test]
fn maximize_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.json");
    let out = stdout(&[
        "maximize",
        "--graph",
        &fixture("worked_example.json"),
        "--k",
        "3",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["final"], "150");
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["steps"].as_array().unwrap().last().unwrap()["count"], "150");
}

#[test]
fn analyze_lists_sets() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["analyze", "--graph", &fixture("mixed_three.json")])).unwrap();
    assert_eq!(v["hereditary"].as_array().unwrap().len(), 4);
    assert_eq!(v["saturated"].as_array().unwrap().len(), 6);
}

#[test]
fn algebra_commands() {
    let line = fixture("line1.json");
    assert_eq!(stdout(&["leavitt", "reduce", "--graph", &line, "e* e"]), "w");
    assert_eq!(stdout(&["leavitt", "dim", "--graph", &line]), "4");
    assert_eq!(stdout(&["leavitt", "dim", "--graph", &fixture("loop.json")]), "infinite");
    assert_eq!(stdout(&["algebra", "mul", "--graph", &line, "v", "e"]), "e");
    assert_eq!(stdout(&["algebra", "mul", "--graph", &line, "e", "v"]), "0");
    assert_eq!(stdout(&["algebra", "dim", "--graph", &line]), "3");
    let q = ["leavitt", "quotient", "--graph", &fixture("loop_with_exit.json"), "--sub", &fixture("loop.json"), "g + e"];
    assert_eq!(stdout(&q), "e");
    let other = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(other.path(), r#"{"vertices":["a","b"],"edges":[{"id":"h","src":"a","dst":"b"},{"id":"k","src":"a","dst":"b"}]}"#)
        .unwrap();
    let p = stdout(&["leavitt", "pullback", "--graph", &line, "--with", other.path().to_str().unwrap()]);
    assert!(p.contains("\"passed\": true") && p.contains("\"pullback\": \"13\""), "{p}");
    let bad = ["leavitt", "pullback", "--graph", &line, "--with", &fixture("doubled_edge.json")];
    assert_eq!(run(&bad).status.code(), Some(5));
}

#[test]
fn matrix_and_convert() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["matrix", "nilpotent", "--graph", &fixture("nilpotent_dag.json")])).unwrap();
    assert_eq!(v["index"], "5");
    let dot = stdout(&["convert", "--graph", &fixture("line1.json"), "--to", "dot"]);
    assert!(dot.starts_with("digraph") && dot.contains("label=\"e\""));
}

#[test]
fn deterministic_output() {
    let args = ["conjecture", "explore", "--n", "10", "--k", "4", "--seed", "3"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "--graph", "/nonexistent.json", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bound", "--n", "2", "--k", "3"]).status.code(), Some(5));
    assert_eq!(run(&["leavitt", "reduce", "--graph", &fixture("line1.json"), "zz"]).status.code(), Some(2));
    let bad = ["leavitt", "quotient", "--graph", &fixture("loop.json"), "--sub", &fixture("line1.json"), "v"];
    assert_eq!(run(&bad).status.code(), Some(5));
    let bundle = ["leavitt", "dim", "--graph", &fixture("bundle_piece.json")];
    assert_eq!(run(&bundle).status.code(), Some(5));
}
