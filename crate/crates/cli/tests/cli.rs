use std::process::{Command, Output};

use serde_json::Value;

fn rslv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rslv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn checks(out: &Output) -> Vec<Value> {
    let v: Value = serde_json::from_slice(&out.stdout).expect("JSON report");
    v["checks"].as_array().unwrap().clone()
}

#[test]
fn coset_classes_for_q3() {
    let out = rslv(&["classify-cosets", "--n", "2", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let cs = checks(&out);
    let count = cs
        .iter()
        .find(|c| c["name"] == "cosets.GxG.n2.q3.class_count")
        .unwrap();
    assert_eq!(count["detail"], "8 orbits, expected 8");
    let names: Vec<&str> = cs.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn index_28() {
    let out = rslv(&["verify-index", "--n", "2", "--p", "2", "--e", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(checks(&out)[0]["detail"]
        .as_str()
        .unwrap()
        .contains("index 28"));
}

#[test]
fn support_is_deterministic() {
    let args = [
        "verify-support",
        "--n",
        "2",
        "--p",
        "3",
        "--e",
        "2",
        "--samples",
        "500",
        "--seed",
        "7",
    ];
    let (a, b) = (rslv(&args), rslv(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(checks(&a), checks(&b));
}

#[test]
fn small_suites_pass() {
    for args in [
        vec!["verify-residue", "--n", "2", "--mode", "symbolic"],
        vec![
            "verify-residue",
            "--n",
            "4",
            "--mode",
            "numeric",
            "--seeds",
            "2",
        ],
        vec!["verify-degenerate", "--n", "2"],
        vec!["verify-zeta", "--m", "2", "--order", "0"],
        vec!["verify-whittaker", "--m", "3", "--max-weight", "3"],
        vec!["verify-bruhat", "--n", "2"],
    ] {
        assert_eq!(rslv(&args).status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn dropped_unit_product_fails_honestly() {
    let out = rslv(&["verify-degenerate", "--n", "2", "--drop-unit-product"]);
    assert_eq!(out.status.code(), Some(1));
    let cs = checks(&out);
    let asm = cs
        .iter()
        .find(|c| c["name"] == "degenerate.n2.symbolic.assembly")
        .unwrap();
    assert_eq!(asm["status"], "skipped");
    assert!(asm["detail"].as_str().unwrap().starts_with("expected-fail"));
    assert!(cs.iter().any(|c| c["status"] == "fail"));
}

#[test]
fn exit_codes() {
    assert_eq!(rslv(&["verify-residue", "--n", "1"]).status.code(), Some(2));
    assert_eq!(rslv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(rslv(&["verify-residue", "--n", "4"]).status.code(), Some(3));
    assert_eq!(
        rslv(&["classify-cosets", "--n", "3", "--q", "3"])
            .status
            .code(),
        Some(3)
    );
    let env = Command::new(env!("CARGO_BIN_EXE_rslv"))
        .args(["classify-cosets", "--n", "2", "--q", "3"])
        .env("RSLV_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn report_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("rslv-report-{}.json", std::process::id()));
    let out = rslv(&["verify-bruhat", "--n", "2", "--out", path.to_str().unwrap()]);
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, String::from_utf8(out.stdout).unwrap());
    let v: Value = serde_json::from_str(&written).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["checks", "command", "elapsed_ms", "params"]);
}
