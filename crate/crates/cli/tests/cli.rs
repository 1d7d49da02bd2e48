use std::io::Write;
use std::process::{Command, Output, Stdio};

use hsigma_core::{lc_equiv, parse, DecideOptions, Status};

const FRIEDMAN_MODEL: &str = r#"{"nodes": [0, 1, 2], "leq": [[0, 1], [0, 2]], "R": [[0, 1], [0, 2]],
    "val": {"1": ["p"], "2": ["q"]}, "root": 0}"#;

fn run(args: &[&str]) -> Output {
    run_with_stdin(args, "")
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hsigma"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn model_file(text: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(text.as_bytes()).unwrap();
    file
}

#[test]
fn decide_exit_codes() {
    let out = run(&["decide", "--logic", "hsigma", "[](p|q) -> ([]p | []q)"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("countermodel"));
    assert_eq!(code(&run(&["decide", "--logic", "lc", "p -> []p"])), 0);
    assert_eq!(code(&run(&["decide", "--logic", "ipc", "p | ~p"])), 1);
    assert_eq!(code(&run(&["decide", "--logic", "ipcbox", "[]p -> []p"])), 0);
}

#[test]
fn decide_errors() {
    assert_eq!(code(&run(&["decide", "p &"])), 2);
    assert_eq!(code(&run(&["decide", "--logic", "ipc", "[]p"])), 2);
    assert_eq!(code(&run(&["decide", "--max-nodes", "0", "p"])), 2);
    assert_eq!(code(&run(&["decide"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn inconclusive_exit_code() {
    let args = ["decide", "--logic", "lc", "--saturation-budget", "0", "--max-nodes", "2"];
    let out = run(&[&args[..], &["[]p -> [](p | q)"]].concat());
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("inconclusive"));
    let out = run(&[&args[..], &["[]p -> p"]].concat());
    assert_eq!(code(&out), 1);
}

#[test]
fn exit_code_precedence_over_several_formulas() {
    assert_eq!(code(&run(&["decide", "--logic", "lc", "p -> []p", "[]p -> p"])), 1);
    assert_eq!(code(&run(&["decide", "--logic", "lc", "[]p -> p", "p &", "p -> []p"])), 2);
    let args = ["decide", "--logic", "lc", "--saturation-budget", "0", "--max-nodes", "2"];
    assert_eq!(code(&run(&[&args[..], &["[]p -> p", "[]p -> [](p | q)"]].concat())), 3);
}

#[test]
fn formulas_from_stdin() {
    let out = run_with_stdin(&["decide", "--logic", "ipc", "-"], "p -> p\n\nq -> q\n");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).matches("provable").count(), 2);
}

#[test]
fn json_verdict_keys() {
    let out = run(&["decide", "--output", "json", "~~[](~~p -> p) -> [](~~p -> p)"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in ["status", "formula", "approx", "cap", "bound", "countermodel"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["approx"], "[](p | ~p) | ~[](p | ~p)");
    assert_eq!(v["cap"], 6);
    assert!(v["countermodel"]["model"]["nodes"].is_array());
}

#[test]
fn printed_countermodels_re_verify() {
    for formula in ["[](p|q) -> ([]p | []q)", "(p -> q) -> [](p -> q)", "[]p -> p"] {
        let out = run(&["decide", "--output", "json", formula]);
        assert_eq!(code(&out), 1, "{formula}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        let file = model_file(&v["countermodel"]["model"].to_string());
        let path = file.path().to_str().unwrap();
        let check = run(&["model", "check", "--perfect", path]);
        assert_eq!(code(&check), 0, "{formula}");
        // the countermodel refutes the formula actually decided, A+ under hsigma
        let decided = v["decided"].as_str().unwrap();
        let eval = run(&["model", "eval", "--output", "json", path, decided]);
        let table: serde_json::Value = serde_json::from_str(&stdout(&eval)).unwrap();
        let node = &v["countermodel"]["node"];
        let row = table["nodes"].as_array().unwrap().iter().find(|r| &r["node"] == node).unwrap();
        assert_eq!(row["forces"], false, "{formula}");
    }
}

#[test]
fn dot_countermodel() {
    let out = run(&["decide", "--output", "dot", "[](p|q) -> ([]p | []q)"]);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("style=dashed"));
}

#[test]
fn approximations() {
    assert_eq!(stdout(&run(&["approx", "--which", "plus", "~~p"])).trim(), "p");
    assert_eq!(stdout(&run(&["approx", "--which", "minus", "(p->q)->r"])).trim(), "(p -> q) -> r");
    let out = run(&["approx", "--which", "plus", "~~[](~~p->p) -> [](~~p->p)"]);
    let result = parse(stdout(&out).trim()).unwrap();
    let expected = parse("[](p|~p) | ~[](p|~p)").unwrap();
    assert_eq!(lc_equiv(&result, &expected, &DecideOptions::default()).status, Status::Provable);
    let traced = stdout(&run(&["approx", "--which", "star", "--trace", "~~p"]));
    assert!(traced.lines().count() > 1);
    assert!(traced.contains("4c-"));
}

#[test]
fn translations() {
    // compared as formulas: the printer drops redundant parentheses
    let out = stdout(&run(&["translate", "--which", "box", "p"]));
    assert_eq!(parse(out.trim()).unwrap(), parse("p & []p").unwrap());
    let out = stdout(&run(&["translate", "--which", "leivant", "p | q"]));
    assert_eq!(parse(out.trim()).unwrap(), parse("(p & []p) | (q & []q)").unwrap());
    assert_eq!(stdout(&run(&["translate", "--which", "leivant", "p"])).trim(), "p");
}

#[test]
fn classification() {
    let out = stdout(&run(&["classify", "p | [](p->q)"]));
    assert!(out.contains("noi: yes  nnil: yes  tnnil: yes"));
    let out = stdout(&run(&["classify", "(p->q)->r"]));
    assert!(out.contains("rho=2"));
    assert!(out.contains("nnil: no"));
    let out = stdout(&run(&["classify", "(p->q)->[]r"]));
    assert!(out.contains("tnnil: no  tnnil-: yes"));
}

#[test]
fn model_eval_table() {
    let file = model_file(FRIEDMAN_MODEL);
    let out = run(&["model", "eval", file.path().to_str().unwrap(), "[](p|q) -> ([]p|[]q)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["0", "false"]));
}

#[test]
fn model_check() {
    let file = model_file(FRIEDMAN_MODEL);
    assert_eq!(code(&run(&["model", "check", "--perfect", file.path().to_str().unwrap()])), 0);
    let out = run_with_stdin(&["model", "check", "--perfect", "-"], r#"{"nodes": [0, 1], "R": [[0, 1]]}"#);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("R ⊆ <"));
}

#[test]
fn model_errors() {
    let out = run_with_stdin(&["model", "check", "-"], "{not json");
    assert_eq!(code(&out), 2);
    let out = run_with_stdin(&["model", "check", "-"], r#"{"nodes": [0], "leq": [[0, 3]]}"#);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&run(&["model", "check", "/nonexistent/model.json"])), 2);
}

#[test]
fn unravel_single_node() {
    let out = run_with_stdin(&["model", "unravel", "-"], r#"{"nodes": [0], "val": {"0": ["p"]}, "root": 0}"#);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["nodes"], serde_json::json!([0]));
    assert_eq!(doc["val"]["0"], serde_json::json!(["p"]));
}
