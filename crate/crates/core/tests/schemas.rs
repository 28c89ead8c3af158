use std::path::PathBuf;

use clap::Parser;
use jsonschema::JSONSchema;
use serde_json::{json, Value};

use admpair::cli::{run, RunConfig};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(rel: &str) -> Value {
    let text = std::fs::read_to_string(root().join(rel)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn assert_valid(schema: &Value, doc: &Value, what: &str) {
    let compiled = JSONSchema::compile(schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    };
    panic!("{what} does not validate: {msgs:?}\n{doc}");
}

/// The report schema restricted to one of its definitions.
fn report_def(name: &str) -> Value {
    let full = load("docs/schemas/report.schema.json");
    json!({
        "$schema": full["$schema"],
        "$ref": format!("#/definitions/{name}"),
        "definitions": full["definitions"],
    })
}

fn emit(args: &[String]) -> (i32, Value) {
    let cfg = RunConfig::try_parse_from(
        std::iter::once("admpair".to_string()).chain(args.iter().cloned()),
    )
    .unwrap();
    run(&cfg)
}

fn s(args: &[&str]) -> Vec<String> {
    args.iter().map(|a| a.to_string()).collect()
}

fn path(rel: &str) -> String {
    root().join(rel).to_string_lossy().into_owned()
}

#[test]
fn input_files_validate() {
    let graph = load("docs/schemas/graph.schema.json");
    let dir = root().join("data/graphs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_valid(&graph, &doc, &p.display().to_string());
        n += 1;
    }
    assert!(n >= 5);
    let curve = load("docs/schemas/curve.schema.json");
    for name in ["unramified", "worked_p3", "genus3_inf"] {
        let rel = format!("data/curves/{name}.json");
        assert_valid(&curve, &load(&rel), &rel);
    }
    assert_valid(
        &load("docs/schemas/places.schema.json"),
        &load("data/places.json"),
        "places",
    );
}

#[test]
fn emitted_documents_validate() {
    let cases: Vec<(&str, Vec<String>)> = vec![
        (
            "symroots",
            s(&[
                "symroots",
                "--curve",
                &path("data/curves/worked_p3.json"),
                "--triple",
                "0,2,1",
            ]),
        ),
        (
            "symroots",
            s(&["symroots", "--curve", &path("data/curves/genus3_inf.json")]),
        ),
        (
            "cluster",
            s(&["cluster", "--curve", &path("data/curves/worked_p3.json")]),
        ),
        (
            "graph",
            s(&["graph", "eval", "--in", &path("data/graphs/theta123.json")]),
        ),
        (
            "graph",
            s(&["graph", "eval", "--in", &path("data/graphs/genus3_k4.json")]),
        ),
        (
            "genus2",
            s(&[
                "genus2",
                "--type",
                "VI",
                "--params",
                "1,2,3",
                "--graph-check",
            ]),
        ),
        ("genus2", s(&["genus2", "--type", "I"])),
        (
            "chi",
            s(&[
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
            ]),
        ),
        (
            "global",
            s(&["global", "--places", &path("data/places.json")]),
        ),
        (
            "verify",
            s(&[
                "verify",
                "--suite",
                "subdivision",
                "--seed",
                "1",
                "--size",
                "2",
            ]),
        ),
        ("error", s(&["genus2", "--type", "IV", "--params", "1"])),
        ("error", s(&["verify", "--suite", "nope"])),
    ];
    let top = load("docs/schemas/report.schema.json");
    for (def, args) in cases {
        let (code, doc) = emit(&args);
        assert_eq!(code == 0, def != "error", "{args:?}: {doc}");
        assert_valid(&report_def(def), &doc, &format!("{def} {args:?}"));
        assert_valid(&top, &doc, &format!("report {args:?}"));
    }
}

#[test]
fn schema_rejects_malformed_documents() {
    let compiled = JSONSchema::compile(&report_def("chi")).unwrap();
    assert!(!compiled.is_valid(&json!({"genus": 2, "chi": 0.5})));
    let graph = JSONSchema::compile(&load("docs/schemas/graph.schema.json")).unwrap();
    assert!(!graph.is_valid(&json!({"vertices": []})));
}
