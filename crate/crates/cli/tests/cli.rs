use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockqsp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn decompose_zero_weight() {
    let o = run(&["decompose", "--family", "C", "--rank", "3", "--ell", "5", "--weight", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"summands":[{"weight":[1,0,0],"mult":1}]}"#);
    let v = json(&["decompose", "--family", "B_HALF", "--rank", "2", "--ell", "7", "--weight", "1,0", "--coefficients"]);
    assert_eq!(v["summands"].as_array().unwrap().len(), 3);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
}

#[test]
fn act_on_zero_weight() {
    let base = ["act", "--family", "C", "--rank", "3", "--ell", "5", "--op", "B", "--weight", "0,0,0", "--pbar"];
    let o = run(&[&base[..], &["7/2"]].concat());
    assert_eq!(stdout(&o).trim(), r#"{"terms":[]}"#);
    let v = json(&[&base[..], &["3/2"]].concat());
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    let v = json(&["act", "--family", "C", "--rank", "3", "--ell", "5", "--op", "K", "--pbar", "1/2", "--sequence=-4:0101"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn linkage_text_and_json() {
    let args = ["linkage", "--family", "C", "--rank", "3", "--ell", "5", "--lhs", "1,0,0", "--rhs", "1,0,0"];
    assert_eq!(json(&args)["linked"], Value::Bool(true));
    let o = run(&[&args[..], &["--human"]].concat());
    assert!(stdout(&o).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["linked:", "true"]));
}

#[test]
fn relation_suite_is_byte_stable() {
    let args = ["check-relations", "--index", "H", "--modulus", "5", "--samples", "100", "--seed", "42", "--width", "30"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["failures"], Value::Array(vec![]));
    assert!(v["instances"].as_u64().unwrap() > 0);
    let b = Command::new(env!("CARGO_BIN_EXE_fockqsp")).args(args).env("FOCKQSP_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["check-relations", "--index", "H", "--modulus", "5", "--samples", "30", "--type-a"]);
    assert_eq!(t.status.code(), Some(0));
}

#[test]
fn theorem_and_iterated_checks() {
    let v = json(&["check-theorems", "--family", "C", "--rank", "3", "--ell", "5", "--max-coord", "6"]);
    assert_eq!(v["pass"], v["total"]);
    let v = json(&["check-theorems", "--family", "B_INT", "--rank", "2", "--ell", "8", "--max-coord", "11/2"]);
    assert_eq!(v["failures"], Value::Array(vec![]));
    let v = json(&["check-iterated", "--family", "C", "--ell", "5", "--reps", "2", "--rank", "3", "--weight", "0,0,0"]);
    assert_eq!(v["pass"], Value::Bool(true));
    let v = json(&["check-iterated", "--family", "B_HALF", "--ell", "5", "--reps", "2", "--charge", "2", "--samples", "10"]);
    assert_eq!(v["pass"], v["total"]);
}

#[test]
fn stabilize_and_classify() {
    let v = json(&["stabilize", "--family", "C", "--ell", "5", "--sequence", "2:01"]);
    assert_eq!(v["m"], 0);
    assert_eq!(v["rank"], 2);
    let v = json(&["classify", "--index", "H", "--modulus", "8"]);
    let kinds: Vec<&str> = v["classes"].as_array().unwrap().iter().map(|c| c["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "THETA_LINKED").count(), 4);
    assert_eq!(kinds.iter().filter(|k| **k == "FIXED").count(), 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["classify", "--index", "H", "--modulus", "3"],
        vec!["decompose", "--family", "C", "--rank", "3", "--ell", "5", "--weight", "0,1,0"],
        vec!["decompose", "--family", "B_HALF", "--rank", "2", "--ell", "6", "--weight", "0,0"],
        vec!["decompose", "--family", "C", "--rank", "2", "--ell", "5", "--weight", "0,0"],
        vec!["linkage", "--family", "C", "--rank", "3", "--ell", "5", "--lhs", "1,0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}
