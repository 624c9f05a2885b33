use std::process::Command;

fn c3(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_c3")).args(args).env("C3_WORKERS", "2").output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn prolong_recovers_sp6() {
    let (code, out) = c3(&["prolong"]);
    assert_eq!(code, 0);
    assert!(out.contains("total 21") && out.contains("isomorphic to sp(6): true"));
}

#[test]
fn single_class_json() {
    let (code, out) = c3(&["classify", "--class", "IV2", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["classes"][0]["components"][0]["generic_d"], 10);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn special_point_by_label() {
    let (code, out) = c3(&["betti", "--class", "N2a(lambda=-5)"]);
    assert_eq!(code, 0);
    assert!(out.contains("b2  1:2  2:1"), "{out}");
}

#[test]
fn model_check_and_errors() {
    assert_eq!(c3(&["verify-models", "--model", "N3"]).0, 0);
    assert_eq!(c3(&["verify-models", "--model", "nothing"]).0, 2);
    assert_eq!(c3(&["classify", "--class", "Q7"]).0, 2);
}

#[test]
fn algebra_dump_is_json() {
    let (code, out) = c3(&["dump-algebra"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 21);
}
