use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;
use tpq::format::{database_json, hypergraph_json, query_json, views_json};
use tpq_oracles::{fixtures, hg};

struct Run {
    code: i32,
    lines: Vec<Value>,
}

fn tpq(args: &[&str]) -> Run {
    tpq_env(args, &[])
}

fn tpq_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_tpq"))
        .args(args)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|_| panic!("stdout is JSON lines: {stdout}")))
        .collect();
    Run {
        code: out.status.code().unwrap(),
        lines,
    }
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    write_text(dir, name, &serde_json::to_string_pretty(v).unwrap())
}

fn write_text(dir: &TempDir, name: &str, text: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn read(p: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(Path::new(p)).unwrap()).unwrap()
}

#[test]
fn tree_projection_decisions() {
    let dir = TempDir::new().unwrap();
    let q5 = write(&dir, "q5.hg", &hypergraph_json(&fixtures::q5().hypergraph().unwrap()));
    let v4 = write(&dir, "v4.hg", &hypergraph_json(&fixtures::v4().hypergraph()));
    let q7 = write(&dir, "q7.hg", &hypergraph_json(&fixtures::q7().hypergraph().unwrap()));
    let v7 = write(&dir, "v7.hg", &hypergraph_json(&fixtures::v7().hypergraph()));
    let emit = dir.path().join("tp.json").to_str().unwrap().to_string();
    let strat = dir.path().join("cg.json").to_str().unwrap().to_string();

    let r = tpq(&["tp", "--exact", &q5, &v4, "--emit", &emit, "--emit-strategy", &strat]);
    assert_eq!(r.code, 0);
    assert_eq!(r.lines[0]["exists"], json!(true));
    assert_eq!(read(&emit), r.lines[0]["treeProjection"]);
    assert!(read(&strat)["nodes"].as_array().is_some_and(|n| !n.is_empty()));
    assert_eq!(tpq(&["validate", "--schema", "tp", &emit]).code, 0);
    assert_eq!(tpq(&["validate", "--schema", "hypergraph", &emit]).code, 0);

    assert_eq!(tpq(&["tp", "--exact", &q7, &v7]).code, 1);
    let r = tpq(&["tp", "--greedy", &q7, &v7]);
    assert_eq!((r.code, &r.lines[0]["exists"]), (1, &json!(false)));
    assert_eq!(tpq(&["tp", &q7, &v7]).code, 2);
}

#[test]
fn acyclicity_and_join_trees() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.hg", &hypergraph_json(&hg(&["AB", "BC", "AC"])));
    let path = write(&dir, "path.hg", &hypergraph_json(&hg(&["AB", "BC", "CD"])));
    assert_eq!(tpq(&["acyclic", &tri]).code, 1);
    assert_eq!(tpq(&["acyclic", &path]).code, 0);
    let r = tpq(&["jointree", &path]);
    assert_eq!(r.code, 0);
    assert_eq!(r.lines[0]["treeEdges"].as_array().unwrap().len(), 2);
    let r = tpq(&["jointree", &tri]);
    assert_eq!((r.code, &r.lines[0]["error"]), (2, &json!("NotAcyclic")));
}

#[test]
fn validation_reports_lines() {
    let dir = TempDir::new().unwrap();
    let good = write_text(&dir, "good.hg", "{\"nodes\": [\"A\", \"B\"], \"edges\": [[\"A\", \"B\"]]}");
    assert_eq!(tpq(&["validate", "--schema", "hypergraph", &good]).code, 0);

    let bad = write_text(&dir, "bad.hg", "{\n  \"nodes\": [\"A\", \"B\"],\n  \"edges\": [\n    [\"A\", \"B\"],\n    [\"B\", \"Z\"]\n  ]\n}\n");
    let r = tpq(&["validate", "--schema", "hypergraph", &bad]);
    assert_eq!(r.code, 2);
    assert_eq!(r.lines[0]["error"], json!("UndeclaredNode"));
    assert_eq!(r.lines[0]["line"], json!(5));
    assert!(r.lines[0]["detail"].as_str().unwrap().contains("`Z`"));

    let db = write_text(&dir, "db.json", "{\"relations\": {\n  \"r\": [\n    [\"a\", \"b\"],\n    [\"a\"]\n  ]\n}}");
    let r = tpq(&["validate", "--schema", "database", &db]);
    assert_eq!((r.code, &r.lines[0]["error"], &r.lines[0]["line"]), (2, &json!("ArityMismatch"), &json!(4)));

    let broken = write_text(&dir, "broken.json", "{\n\"edges\": [[\"A\"]\n");
    let r = tpq(&["validate", "--schema", "hypergraph", &broken]);
    assert_eq!((r.code, &r.lines[0]["error"]), (2, &json!("Parse")));

    let q = write(&dir, "q.json", &query_json(&fixtures::q4()));
    let views = write(&dir, "v.json", &views_json(&fixtures::v4()));
    assert_eq!(tpq(&["validate", "--schema", "query", &q]).code, 0);
    assert_eq!(tpq(&["validate", "--schema", "views", &views, "--query", &q]).code, 0);
    assert_eq!(tpq(&["validate", "--schema", "views", &views]).code, 2);

    let r = tpq(&["acyclic", "/nonexistent/file.json"]);
    assert_eq!((r.code, &r.lines[0]["error"]), (2, &json!("Io")));
    let r = tpq(&["no-such-command"]);
    assert_eq!((r.code, &r.lines[0]["error"]), (2, &json!("Usage")));
}

#[test]
fn query_commands() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", &query_json(&fixtures::q4()));
    let v = write(&dir, "v.json", &views_json(&fixtures::v4()));
    let db = write(&dir, "db.json", &database_json(&fixtures::db4()));

    let r = tpq(&["core", &q]);
    assert_eq!(r.lines[0]["cores"].as_array().unwrap().len(), 2);
    assert_eq!(tpq(&["tpcovered", "--vars", "F,E", &q, &v]).code, 0);
    assert_eq!(tpq(&["tpcovered", "--vars", "D,C", &q, &v]).code, 1);
    assert_eq!(tpq(&["certify", "--mode", "gc", &q, &v]).code, 1);
    assert_eq!(tpq(&["certify", "--mode", "nonempty", &q, &v]).code, 0);

    let r = tpq(&["reduct", "--trace", &q, &v, &db]);
    assert_eq!(r.code, 0);
    assert_eq!(r.lines.len(), 1, "db4 is already locally consistent");
    assert_eq!(r.lines[0]["empty"], json!(false));

    let r = tpq(&["eval", "--output", "A,B,C", "--via", "lc", &q, &v, &db]);
    assert_eq!(r.code, 0);
    let summary = &r.lines.last().unwrap()["summary"];
    assert_eq!(summary["exactness"], json!("Exact"));
    assert_eq!(r.lines.len(), 3);

    let r = tpq(&["width", "--mode", "ghw", "--kmax", "3", &q]);
    assert_eq!(r.lines[0]["width"], json!(2));

    let r = tpq(&["--seed", "7", "probe-counterexample", "--attempts", "20", &q, &v]);
    assert_eq!(r.code, 0);
    assert_eq!(r.lines[0]["hits"], json!(0));
}

#[test]
fn evaluation_over_a_tree_projection() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", &json!({"atoms": [
        {"rel": "r", "terms": [{"var": "A"}, {"var": "B"}]},
        {"rel": "s", "terms": [{"var": "B"}, {"var": "C"}]}
    ]}));
    let base = write(&dir, "base.json", &json!({"relations": {
        "r": [["a", "b"], ["x", "y"], ["a2", "b"]],
        "s": [["b", "c"]]
    }}));
    let r = tpq(&["views", "--method", "acyc", &q, &base]);
    assert_eq!(r.code, 0);
    let generated = write(&dir, "views.json", &r.lines[0]);
    let r = tpq(&["reduct", "--trace", &q, &generated, &generated]);
    assert!(r.lines.len() > 1);
    assert!(r.lines[0]["deleted"].as_u64().unwrap() > 0);

    let r = tpq(&["eval", "--output", "A,C", &q, &generated, &generated]);
    assert_eq!(r.code, 0);
    assert_eq!(r.lines, vec![json!({"A": "a", "C": "c"}), json!({"A": "a2", "C": "c"})]);
    let r = tpq(&["eval", "--output", "A", "--limit", "1", &q, &generated, &generated]);
    assert_eq!(r.lines.len(), 1);

    let r = tpq(&["views", "--method", "tw", "-k", "1", &q, &base]);
    assert_eq!(r.lines[0]["views"].as_array().unwrap().len(), 2 + 6);
}

#[test]
fn arity_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let q5 = write(&dir, "q5.hg", &hypergraph_json(&fixtures::q5().hypergraph().unwrap()));
    let v4 = write(&dir, "v4.hg", &hypergraph_json(&fixtures::v4().hypergraph()));
    let r = tpq_env(&["tp", "--exact", &q5, &v4], &[("TPQ_ARITY_CAP", "2")]);
    assert_eq!((r.code, &r.lines[0]["error"]), (2, &json!("ArityCapExceeded")));
    let r = tpq_env(&["tp", "--exact", &q5, &v4], &[("TPQ_ARITY_CAP", "x")]);
    assert_eq!(r.code, 2);
}
