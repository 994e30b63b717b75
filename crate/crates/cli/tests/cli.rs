//! End-to-end runs of the binary: output shapes, exit codes, determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn zeta_fixed_length_reports_closed_form() {
    let out = run(&["zeta", "--class", "all;len:2", "--s", "2", "--prec", "50"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("7/360 * pi^4"), "{text}");
    assert!(text.contains("length-2 sum: 1.89"), "{text}");
}

#[test]
fn pi_product_agrees() {
    let out = run(&["pi", "--m", "2", "--t", "1", "--N", "4000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("closed:  1.5707963267948966"), "{text}");
    assert!(text.contains("verdict: agree"), "{text}");
}

#[test]
fn route_comparison_with_weight_and_point() {
    let out = run(&[
        "verify",
        "five-forms",
        "--f",
        "pow:-2",
        "--q",
        "3/10",
        "--prec",
        "30",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("continued-fraction"), "{text}");
    assert!(text.contains("verdict: agree"), "{text}");
}

#[test]
fn only_filter_selects_one_suite() {
    let out = run(&["verify", "--only", "congruences", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    let suites = v["suites"].as_array().expect("array");
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "congruences");
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["verify", "--only", "eta-quotients", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_class_is_a_usage_error() {
    let out = run(&["zeta", "--class", "bogus:", "--s", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn starved_cap_fails_the_pinned_tolerance() {
    // at cap 100 the cubic product misses its 1e-8 target by orders
    let out = run(&["verify", "--only", "cubic-product", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("[FAIL] cubic-product"), "{text}");
}

#[test]
fn partitions_json_counts_and_lists() {
    let out = run(&["partitions", "--n", "5", "--class", "all", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["count"], "7");
    assert_eq!(v["partitions"].as_array().unwrap().len(), 7);
}

#[test]
fn etaq_layers_cross_check() {
    let out = run(&[
        "etaq",
        "--layer",
        "X=all;f=const:1;inner=-;exp=-1",
        "-N",
        "6",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["paths_agree"], serde_json::Value::Bool(true));
    let coeffs: Vec<&str> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["1", "1", "2", "3", "5", "7", "11"]);
}

#[test]
fn unknown_expand_form_is_a_usage_error() {
    let out = run(&["expand", "--form", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mzv_closed_form_shape() {
    let out = run(&["mzv", "--t", "1", "--k", "3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["closed"], "1/5040 * pi^6");
    assert_eq!(v["pi_power"], 6);
}
