use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use serde_json::Value;

use admpair::cli::{render, run, RunConfig};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn run_args(args: &[&str]) -> (i32, Value) {
    let cfg = RunConfig::try_parse_from(std::iter::once("admpair").chain(args.iter().copied()))
        .expect("arguments parse");
    run(&cfg)
}

fn bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_admpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn graph_eval_loop() {
    let (code, doc) = run_args(&["graph", "eval", "--in", &data("graphs/loop1.json")]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["epsilon"], "1/6");
    assert_eq!(doc["phi"], "1/12");
    assert_eq!(doc["delta"], "1");
    assert_eq!(doc["admissibility_defect"], "0");
}

#[test]
fn graph_eval_banana_phi_matches_chi() {
    let (code, doc) = run_args(&["graph", "eval", "--in", &data("graphs/genus3_banana.json")]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["phi"], "10/9");
    assert_eq!(doc["counts"]["chi"], "10/9");
}

#[test]
fn symroots_single_triple() {
    let (code, doc) = run_args(&[
        "symroots",
        "--curve",
        &data("curves/unramified.json"),
        "--triple",
        "0,1,2",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["l_pow_2g"], "16/5");
}

#[test]
fn worked_vector_pairing() {
    let (code, doc) = run_args(&[
        "symroots",
        "--curve",
        &data("curves/worked_p3.json"),
        "--triple",
        "0,2,1",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["nu_l"], "2");
    assert_eq!(doc["pairing"], "1");
}

#[test]
fn genus2_with_graph_check() {
    let (code, doc) = run_args(&[
        "genus2",
        "--type",
        "VII",
        "--params",
        "1,1,1",
        "--graph-check",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["chi"], "1/9");
    assert_eq!(doc["graph_check"]["matches"], true);
}

#[test]
fn chi_command() {
    let (code, doc) = run_args(&[
        "invariants",
        "chi",
        "--d",
        "6",
        "--eps",
        "5/9",
        "--delta",
        "3",
        "--genus",
        "2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["chi"], "1/9");
}

#[test]
fn arity_error_document() {
    let (code, doc) = run_args(&["genus2", "--type", "IV", "--params", "1"]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"], "arity");
    assert_eq!(doc["path"], "--params");
    assert!(doc["detail"].as_str().unwrap().contains("expected 2"));
}

#[test]
fn malformed_curve_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"genus":2,"roots":["0","1","x","3","4","5"]}"#).unwrap();
    let (code, doc) = run_args(&["symroots", "--curve", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"], "parse");
}

#[test]
fn cluster_rejects_non_normal_form() {
    let (code, doc) = run_args(&[
        "cluster",
        "--curve",
        &data("curves/unramified.json"),
        "--prime",
        "3",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["error"], "not_kausz_form");
}

#[test]
fn unknown_suite_is_a_validation_error() {
    let (code, doc) = run_args(&["verify", "--suite", "bogus"]);
    assert_eq!(code, 1);
    assert_eq!(doc["path"], "--suite");
}

#[test]
fn verify_small_suite_passes() {
    let (code, doc) = run_args(&[
        "verify",
        "--suite",
        "genus2-table",
        "--seed",
        "3",
        "--size",
        "1",
    ]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["failed"], 0);
}

#[test]
fn binary_exit_codes() {
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    let out = bin(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["error"], "usage");
    let out = bin(&["genus2", "--type", "II", "--params", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &str| {
        vec![
            "--out".to_string(),
            out.to_string(),
            "verify".to_string(),
            "--suite".to_string(),
            "subdivision".to_string(),
            "--seed".to_string(),
            "5".to_string(),
            "--size".to_string(),
            "3".to_string(),
        ]
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = Command::new(env!("CARGO_BIN_EXE_admpair"))
            .args(args(p.to_str().unwrap()))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let (_, d1) = run_args(&["symroots", "--curve", &data("curves/genus3_inf.json")]);
    let (_, d2) = run_args(&["symroots", "--curve", &data("curves/genus3_inf.json")]);
    assert_eq!(render(&d1), render(&d2));
}
