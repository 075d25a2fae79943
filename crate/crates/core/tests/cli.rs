mod common;

use std::process::{Command, Output};

use common::{fixture_dir, FIXTURES};
use serde_json::Value;

fn xray(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xray")).args(args).env("XRAY_COLOR", "0").output().unwrap()
}

fn path(name: &str) -> String {
    fixture_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(name: &str) -> Value {
    let o = xray(&["analyze", &path(name), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn every_fixture_succeeds_in_every_format() {
    for f in FIXTURES {
        for format in ["text", "json", "dot"] {
            let o = xray(&["analyze", &path(f), "--format", format]);
            assert_eq!(o.status.code(), Some(0), "{f} {format}: {}", stderr(&o));
            assert!(!o.stdout.is_empty());
        }
    }
}

#[test]
fn malformed_inputs_exit_1_with_a_location() {
    let dir = fixture_dir().join("malformed");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path().display().to_string();
        let o = xray(&["analyze", &p]);
        assert_eq!(o.status.code(), Some(1), "{p}");
        let err = stderr(&o);
        assert!(err.starts_with(&format!("error: {p}:")), "{p}: {err}");
        assert!(o.stdout.is_empty());
        seen += 1;
    }
    assert_eq!(seen, 6);
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = xray(&["analyze", "no/such/File.java"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no/such/File.java"));
}

#[test]
fn bad_flags_are_usage_errors() {
    let overload = path("Overload.java");
    for args in [
        vec!["analyze", &overload, "--format", "xml"],
        vec!["analyze", &overload, "--view", "everything"],
        vec!["analyze", &overload, "--mode", "both"],
        vec!["analyze", &overload, "--core-threshold", "2"],
        vec!["analyze"],
        vec!["inspect", &overload],
    ] {
        assert_eq!(xray(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(xray(&["analyze", &overload, "--class", "Nope"]).status.code(), Some(2));
    assert_eq!(xray(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_superclass_is_accepted_with_the_flag() {
    let p = fixture_dir().join("malformed/UnknownSuper.java").display().to_string();
    let o = xray(&["analyze", &p, "--allow-external-super", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["meta"]["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("Missing")));
}

#[test]
fn json_schema_and_overload_values() {
    let v = json("Overload.java");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["class", "concepts", "dependencies", "entities", "meta", "relations", "views"]);
    assert_eq!(v["meta"]["summary"]["proper_concept_count"], 2);
    assert_eq!(v["meta"]["context_mode"], "uses");
    assert_eq!(v["meta"]["tool"], "xray");

    let ids: Vec<&str> = v["entities"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);

    for c in v["concepts"].as_array().unwrap() {
        assert!(c["extent"].is_array() && c["intent"].is_array() && c["proper"].is_boolean());
    }
    let b_edge = v["dependencies"]
        .as_array()
        .unwrap()
        .iter()
        .find(|d| d["sources"] == serde_json::json!(["b"]))
        .expect("edge from b");
    assert_eq!(b_edge["targets"], serde_json::json!(["test(int,int)"]));
    assert_eq!(b_edge["kind"], "ExclusiveDirect");
    assert!(b_edge["witnesses"].is_array());
}

#[test]
fn json_lists_the_merged_override() {
    let v = json("Override.java");
    let merged = v["entities"].as_array().unwrap().iter().find(|e| e["id"] == "show()#merged").unwrap();
    assert_eq!(merged["members"], serde_json::json!(["A.show()", "B.show()"]));
}

#[test]
fn json_round_trip_is_byte_identical() {
    for f in FIXTURES {
        let o = xray(&["analyze", &path(f), "--format", "json"]);
        let text = stdout(&o);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{f}");
    }
}

fn dot_counts(text: &str) -> (usize, usize) {
    let nodes = text.lines().filter(|l| l.trim_start().starts_with('c') && l.contains("[label=")).count();
    let edges = text.lines().filter(|l| l.contains(" -> ")).count();
    (nodes, edges)
}

#[test]
fn dot_matches_the_lattice() {
    let o = xray(&["analyze", &path("Overload.java"), "--format", "dot", "--view", "concepts"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("digraph "));
    assert!(text.trim_end().ends_with('}'));
    assert_eq!(dot_counts(&text), (2, 1));

    for f in FIXTURES {
        let v = json(f);
        let concepts = v["concepts"].as_array().unwrap();
        let covers: usize = concepts.iter().map(|c| c["children"].as_array().unwrap().len()).sum();
        let text = stdout(&xray(&["analyze", &path(f), "--format", "dot"]));
        assert_eq!(dot_counts(&text), (concepts.len(), covers), "{f}");
    }
}

#[test]
fn export_cxt_writes_the_context() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("overload.cxt");
    let o = xray(&["analyze", &path("Overload.java"), "--export-cxt", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let cxt = std::fs::read_to_string(&out).unwrap();
    assert_eq!(cxt, "B\n\n2\n2\n\ntest(int)\ntest(int,int)\na\nb\nX.\nXX\n");

    let bad = dir.path().join("missing-dir/x.cxt");
    let o = xray(&["analyze", &path("Overload.java"), "--export-cxt", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn text_views_can_be_selected() {
    let all = stdout(&xray(&["analyze", &path("Overload.java")]));
    let deps = stdout(&xray(&["analyze", &path("Overload.java"), "--view", "deps"]));
    assert!(deps.len() < all.len());
    assert!(deps.contains("ExclusiveDirect"));
    assert!(!deps.contains("\x1b["));
    let colored = Command::new(env!("CARGO_BIN_EXE_xray"))
        .args(["analyze", &path("Overload.java")])
        .env("XRAY_COLOR", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8(colored.stdout).unwrap().contains("\x1b["));
}

#[test]
fn mode_changes_the_reported_context() {
    let o = xray(&["analyze", &path("Binomial.java"), "--mode", "calls", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["context_mode"], "calls");
}

#[test]
fn several_files_and_explicit_class() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.java");
    let b = dir.path().join("B.java");
    std::fs::write(&a, "class A { int x; void f() { x = 1; } }").unwrap();
    std::fs::write(&b, "class B extends A { int y; void g() { y = x; } }").unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let v: Value = serde_json::from_slice(&xray(&["analyze", a, b, "--format", "json"]).stdout).unwrap();
    assert_eq!(v["class"], "B");
    let v: Value =
        serde_json::from_slice(&xray(&["analyze", a, b, "--class", "A", "--format", "json"]).stdout).unwrap();
    assert_eq!(v["class"], "A");
}
