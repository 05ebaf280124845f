use std::process::{Command, Output};

use serde_json::Value;

fn perdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = perdyn(&full);
    let body = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), body)
}

#[test]
fn periodic_over_f4() {
    let (code, v) = json(&["periodic", "--p", "2", "--f", "2", "--poly", "x^2 - 1"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["count"], 4);
    assert_eq!(v["result"]["exactness"]["counts"]["1"], 2);
    assert_eq!(v["result"]["exactness"]["counts"]["2"], 2);
}

#[test]
fn periodic_over_q3() {
    let (code, v) = json(&["periodic", "--p", "3", "--poly", "x^3 + 3x + 2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 3);
}

#[test]
fn degree_not_divisible_by_p() {
    let (code, v) = json(&["periodic", "--p", "3", "--poly", "x^2 + 1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "DegreeNotDivisibleByP");
}

#[test]
fn text_output_lists_assertions() {
    let out = perdyn(&["dynatomic", "--poly", "x^2 + c", "--symbolic-c", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Phi_2(x) = x^2 + x + c + 1"), "{text}");
    assert!(text.contains("PASS degree"), "{text}");
}

#[test]
fn mobius_flag() {
    let (code, v) = json(&[
        "dynatomic",
        "--poly",
        "x^2 - 1",
        "--n",
        "2",
        "--verify-mobius",
        "4",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["passed"], true);
}

#[test]
fn classify_golden_field() {
    let (code, v) = json(&["classify", "--delta", "5", "--c", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["count"], 4);
}

#[test]
fn classify_rejects_non_integral_c() {
    let out = perdyn(&["classify", "--delta", "33", "--c", "-71/48"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error[NotIntegralAt2]"), "{err}");
}

#[test]
fn classify_portrait_dot() {
    let out = perdyn(&[
        "--format",
        "dot",
        "classify",
        "--delta",
        "-1",
        "--c",
        "i",
        "--portrait",
    ]);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 5);
}

#[test]
fn dot_needs_a_graph() {
    let out = perdyn(&[
        "--format", "dot", "periodic", "--p", "2", "--poly", "x^2 + 1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_counts_and_dot_file() {
    let dir = std::env::temp_dir().join(format!("perdyn-oracle-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.dot");
    let (code, v) = json(&[
        "oracle",
        "--p",
        "2",
        "--f",
        "2",
        "--poly",
        "x^2 - 1",
        "--levels",
        "2",
        "--dot",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["counts"], serde_json::json!([4, 4]));
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot.matches("subgraph cluster").count(), 4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweeps_are_deterministic() {
    let args = [
        "--seed",
        "11",
        "verify-bounds",
        "--p",
        "3",
        "--f",
        "1",
        "--kind",
        "star",
        "--samples",
        "30",
    ];
    let (a, b) = (json(&args), json(&args));
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let (_, c) = json(&[
        "--seed",
        "12",
        "verify-bounds",
        "--p",
        "3",
        "--f",
        "1",
        "--kind",
        "star",
        "--samples",
        "30",
    ]);
    assert_eq!(c["passed"], true);
}

#[test]
fn nonexample_sweep() {
    let (code, v) = json(&[
        "verify-bounds",
        "--kind",
        "star-star",
        "--samples",
        "10",
        "--nonexample",
    ]);
    assert_eq!(code, 0, "{v}");
    let names: Vec<&str> = v["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"nonexample_period_four"), "{names:?}");
}

#[test]
fn bad_arguments_are_usage_errors() {
    let out = perdyn(&["periodic", "--p", "4", "--poly", "x^2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = perdyn(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
