use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const REFINEMENT: &str = r#"{"n": 4, "entries": [[14, 2, 18, 5], [5, 2, 3, 14], [1, 13, 12, 0], [19, 6, 14, 12]]}"#;
const FIRST: &str = r#"{"n": 4, "entries": [[4, 7, 10, 2], [9, 10, 2, 0], [10, 9, 7, 2], [9, 10, 7, 1]]}"#;
const SMALL: &str = r#"{"n": 3, "entries": [[4, 7, 2], [5, 2, 5], [6, 3, 1]]}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn maxmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxmin")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn solve_refinement_example() {
    let fx = Fixture::new();
    let path = fx.file("a.json", REFINEMENT);
    let out = maxmin(&["solve", "--matrix", path.to_str().unwrap(), "--p", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "solved");
    assert_eq!(report["lambda"], "7");
    assert_eq!(report["eigenvector_columns"][0], 0);
    assert_eq!(report["refined_dbm"]["entries"][3], serde_json::json!([2, 11, 7, 0]));
    assert_eq!(report["active"]["strongly_active"]["entries"][0][0], "+inf");
}

#[test]
fn solve_writes_out_file_and_table() {
    let fx = Fixture::new();
    let path = fx.file("a.json", REFINEMENT);
    let target = fx.dir.path().join("report.json");
    let out = maxmin(&[
        "solve", "--matrix", path.to_str().unwrap(), "--p", "2", "--json", "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let report: Value = serde_json::from_str(&fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(report["lambda"], "7");

    let out = maxmin(&["solve", "--matrix", path.to_str().unwrap(), "--p", "2", "--table"]);
    assert!(stdout(&out).contains("lambda: 7"));
}

#[test]
fn solve_without_rounds_reports_bounds_only() {
    let fx = Fixture::new();
    let path = fx.file("a.json", FIRST);
    let out = maxmin(&["solve", "--matrix", path.to_str().unwrap(), "--p", "2", "--max-rounds", "0"]);
    assert_eq!(code(&out), 3);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "unresolved");
    assert_eq!(report["lambda"], Value::Null);
    assert_eq!(report["bounds"]["lower"], 4);
    assert_eq!(report["bounds"]["upper"], 7);
    assert_eq!(
        report["stabilized_dbm"]["entries"],
        serde_json::json!([[0, -1, -6, -5], [-1, 0, -5, -5], [2, 2, 0, -1], [2, 1, -1, 0]])
    );
    assert_eq!(report["iterations"], serde_json::json!([]));
}

#[test]
fn usage_errors_exit_one() {
    let fx = Fixture::new();
    let path = fx.file("a.json", SMALL);
    let p = path.to_str().unwrap();
    assert_eq!(code(&maxmin(&["solve", "--matrix", p, "--p", "0"])), 1);
    assert_eq!(code(&maxmin(&["solve", "--matrix", p, "--p", "4"])), 1);
    assert_eq!(code(&maxmin(&["solve", "--matrix", p])), 1);
    assert_eq!(code(&maxmin(&["solve", "--matrix", "/nonexistent.json", "--p", "1"])), 1);
    assert_eq!(code(&maxmin(&["frobnicate"])), 1);
}

#[test]
fn malformed_file_names_position() {
    let fx = Fixture::new();
    let path = fx.file("bad.json", r#"{"n": 2, "entries": [[1, 2], [3, "oops"]]}"#);
    let out = maxmin(&["solve", "--matrix", path.to_str().unwrap(), "--p", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("row 2, column 2"), "{}", stderr(&out));

    let path = fx.file("short.json", r#"{"n": 2, "entries": [[1, 2], [3]]}"#);
    let out = maxmin(&["solve", "--matrix", path.to_str().unwrap(), "--p", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("row 2"), "{}", stderr(&out));
}

#[test]
fn verify_eigenspace() {
    let fx = Fixture::new();
    let path = fx.file("a.json", SMALL);
    let p = path.to_str().unwrap();
    let run = |x: &str| maxmin(&["verify", "--matrix", p, "--p", "2", "--lambda", "4", "--vector", x]);

    let out = run("0,1,0");
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "row 1: 0\nrow 2: 0\nrow 3: 0\nverified\n");

    let out = run("5,1,0");
    assert_ne!(code(&out), 0);
    assert!(stdout(&out).starts_with("row 1: -1\n"), "{}", stdout(&out));

    assert_eq!(code(&run("1,2,1")), 0);
    assert_eq!(code(&run("1/2,3/2,1/2")), 0);
    assert_eq!(code(&run("0,1")), 1);
}

fn dot_arcs(dot: &str) -> Vec<String> {
    dot.lines()
        .filter(|l| l.contains("->"))
        .map(|l| l.trim().split(" [").next().unwrap().to_string())
        .collect()
}

#[test]
fn graph_saturation() {
    let fx = Fixture::new();
    let path = fx.file("a.json", SMALL);
    let p = path.to_str().unwrap();
    let out = maxmin(&["graph", "--matrix", p, "--p", "2", "--which", "sat", "--vector", "0,1,0"]);
    assert_eq!(code(&out), 0);
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph sat {"));
    let arcs = dot_arcs(&dot);
    for arc in ["1 -> 1", "2 -> 3", "3 -> 2"] {
        assert!(arcs.contains(&arc.to_string()), "{dot}");
    }
    let mut sorted = arcs.clone();
    sorted.sort();
    assert_eq!(arcs, sorted);

    let out = maxmin(&["graph", "--matrix", p, "--p", "2", "--which", "sat"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn graph_certified_and_possible() {
    let fx = Fixture::new();
    let path = fx.file("a.json", REFINEMENT);
    let p = path.to_str().unwrap();
    let act = stdout(&maxmin(&["graph", "--matrix", p, "--p", "2", "--which", "act"]));
    assert_eq!(dot_arcs(&act), ["1 -> 4", "2 -> 3", "4 -> 3"]);
    assert!(act.contains("1 -> 4 [label=\"5\", style=bold];"));
    assert!((1..=4).all(|v| act.contains(&format!("  {v};"))));

    let pos = stdout(&maxmin(&["graph", "--matrix", p, "--p", "2", "--which", "pos"]));
    let pos_arcs = dot_arcs(&pos);
    assert!(dot_arcs(&act).iter().all(|a| pos_arcs.contains(a)));
    assert_eq!(pos_arcs.len(), 6);
}

#[test]
fn bench_single_cell() {
    let out = maxmin(&["bench", "--sizes", "5", "--p", "2", "--count", "1", "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cells = report["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 1);
    let rate = cells[0]["success_rate"].as_f64().unwrap();
    assert!(rate == 0.0 || rate == 1.0);

    assert_eq!(code(&maxmin(&["bench", "--sizes", "3", "--p", "4", "--count", "1"])), 1);
}

#[test]
fn bench_is_deterministic_modulo_timing() {
    let run = || {
        let out = maxmin(&["bench", "--sizes", "4,5", "--count", "3", "--seed", "11"]);
        let mut v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        for c in v["cells"].as_array_mut().unwrap() {
            c["median_millis"] = Value::Null;
        }
        for i in v["instances"].as_array_mut().unwrap() {
            i["millis"] = Value::Null;
        }
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}
