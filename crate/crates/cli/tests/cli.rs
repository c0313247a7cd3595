use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lcltrees::homproblems::{build_h_delta, lcl_from_graph, SimpleGraph};
use lcltrees::io::{parse_value, serialize_graph, serialize_lcl};
use lcltrees::random::random_tree;
use lcltrees::Lcl;
use serde_json::Value;
use tempfile::TempDir;

fn lcltrees(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcltrees"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn clique(n: usize, delta: usize) -> Lcl {
    let mut h = SimpleGraph::with_vertices(n);
    for a in 0..n {
        for b in a + 1..n {
            h.add_edge(a, b).unwrap();
        }
    }
    lcl_from_graph(&h, delta).unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_then_verify() {
    let d = Dir::new();
    let lcl = d.write("lcl.json", &serialize_lcl(&clique(4, 3)));
    let g = d.write("g.json", &serialize_graph(&random_tree(7, 60, 3)));
    let col = d.path("c.json");
    let trace = d.path("t.jsonl");
    for strategy in ["greedy", "toast"] {
        let o = lcltrees(&[
            "solve", "--lcl", s(&lcl), "--graph", s(&g), "--strategy", strategy,
            "--out", s(&col), "--trace", s(&trace),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let steps = std::fs::read_to_string(&trace).unwrap();
        assert!(steps.lines().all(|l| parse_value(l).is_ok()));
        let o = lcltrees(&["verify", "--lcl", s(&lcl), "--graph", s(&g), "--coloring", s(&col)]);
        assert_eq!(code(&o), 0);
        assert_eq!(parse_value(&stdout(&o)).unwrap()["ok"], true);
    }

    // Give one vertex a monochromatic neighbor.
    let mut doc: Value = parse_value(&std::fs::read_to_string(&col).unwrap()).unwrap();
    let a = doc["assignments"].as_array_mut().unwrap();
    let (e, l) = (a[0]["edge"].clone(), a[0]["label"].clone());
    for x in a.iter_mut().filter(|x| x["edge"] == e) {
        x["label"] = l.clone();
    }
    let bad = d.write("bad.json", &doc.to_string());
    let o = lcltrees(&["verify", "--lcl", s(&lcl), "--graph", s(&g), "--coloring", s(&bad)]);
    assert_eq!(code(&o), 4);
    let report = parse_value(&stdout(&o)).unwrap();
    assert_eq!(report["ok"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn adversary_guards_exit_two() {
    let d = Dir::new();
    let k3 = d.write("k3.json", &serialize_lcl(&clique(3, 2)));
    let k4 = d.write("k4.json", &serialize_lcl(&clique(4, 3)));
    let o = lcltrees(&["adversary", "--lcl", s(&k3), "--mode", "hc", "--solver", "builtin:lookahead:1"]);
    assert_eq!(code(&o), 2);
    let o = lcltrees(&["adversary", "--lcl", s(&k4), "--mode", "comp", "--solver", "builtin:lookahead:1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn adversary_transcript_and_budget() {
    let d = Dir::new();
    let k3 = d.write("k3.json", &serialize_lcl(&clique(3, 3)));
    let forest = d.path("f.json");
    let args = ["adversary", "--lcl", s(&k3), "--mode", "comp", "--solver", "builtin:lookahead:1"];
    let o = lcltrees(&[&args[..], &["--emit-graph", s(&forest)]].concat());
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let last = parse_value(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["outcome"], "VIOLATION");
    assert!(std::fs::metadata(&forest).unwrap().len() > 0);
    assert_eq!(stdout(&lcltrees(&args)), text);

    let o = lcltrees(&[&args[..], &["--max-vertices", "10"]].concat());
    assert_eq!(code(&o), 3);
}

#[test]
fn malformed_input_exits_one() {
    let d = Dir::new();
    let bad = d.write("bad.json", "{\"delta\": 2, \"sigma\": [");
    let o = lcltrees(&["classify", "--lcl", s(&bad)]);
    assert_eq!(code(&o), 1);
    let o = lcltrees(&["classify", "--lcl", s(&d.path("missing.json"))]);
    assert_eq!(code(&o), 1);
}

#[test]
fn subset_cap_exits_three() {
    let d = Dir::new();
    let h2 = d.write("h2.json", &serialize_lcl(&lcl_from_graph(&build_h_delta(2).unwrap(), 2).unwrap()));
    let o = lcltrees(&["classify", "--lcl", s(&h2), "--max-subsets", "2"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn classify_reports_classes() {
    let d = Dir::new();
    let k3 = d.write("k3.json", &serialize_lcl(&clique(3, 3)));
    let o = lcltrees(&["classify", "--lcl", s(&k3)]);
    assert_eq!(code(&o), 0);
    let r = parse_value(&stdout(&o)).unwrap();
    assert_eq!(r["classes"]["HCOMP"], true);
    assert_eq!(r["classes"]["BAIRE"], true);
    assert_eq!(r["classes"]["COMPUTABLE"], false);
    assert_eq!(r["greedy"], Value::Null);
    assert_eq!(r["full"]["l"], 2);
    assert_eq!(stdout(&lcltrees(&["classify", "--lcl", s(&k3)])), stdout(&o));

    let o = lcltrees(&["classify", "--lcl", s(&k3), "--mode", "greedy"]);
    let r = parse_value(&stdout(&o)).unwrap();
    assert!(r.get("full").is_none());
}

#[test]
fn homomorphism_commands() {
    let d = Dir::new();
    let o = lcltrees(&["hdelta", "--delta", "3"]);
    assert_eq!(code(&o), 0);
    let h3 = SimpleGraph::from_json(&parse_value(&stdout(&o)).unwrap()).unwrap();
    assert_eq!(h3, build_h_delta(3).unwrap());

    let h = d.write("h.json", &build_h_delta(2).unwrap().to_json().to_string());
    let o = lcltrees(&["hom", "--graph", s(&h), "--delta", "2"]);
    assert_eq!(code(&o), 0);
    assert!(parse_value(&stdout(&o)).unwrap()["sigma"].as_array().unwrap().len() == 5);

    let mut path = SimpleGraph::with_vertices(12);
    for i in 1..12 {
        path.add_edge(i - 1, i).unwrap();
    }
    let f = d.write("f.json", &path.to_json().to_string());
    let o = lcltrees(&["homsolve", "--forest", s(&f), "--delta", "2"]);
    assert_eq!(code(&o), 0);
    let map = parse_value(&stdout(&o)).unwrap();
    assert_eq!(map["map"].as_object().unwrap().len(), 12);

    let tri = d.write("t.json", r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["c","a"]]}"#);
    let o = lcltrees(&["homsolve", "--forest", s(&tri), "--delta", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn toast_command_is_deterministic() {
    let d = Dir::new();
    let g = d.write("g.json", &serialize_graph(&random_tree(3, 40, 3)));
    let o = lcltrees(&["toast", "--graph", s(&g), "--l", "2"]);
    assert_eq!(code(&o), 0);
    assert!(parse_value(&stdout(&o)).is_ok());
    assert_eq!(stdout(&lcltrees(&["toast", "--graph", s(&g), "--l", "2"])), stdout(&o));
    let o = lcltrees(&["toast", "--graph", s(&g), "--l", "2", "--stream", "999"]);
    assert_eq!(code(&o), 2);
}
