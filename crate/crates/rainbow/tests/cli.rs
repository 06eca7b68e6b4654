use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rainbow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rainbow")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Drops every `timing` object so reports can be compared byte for byte.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn tight_construction_has_no_matching() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tight.json");
    let out = rainbow(&["generate", "--construction", "theorem13-tight", "--n", "4", "--ks", "2,2", "--out", path(&file)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = rainbow(&["--json", "solve", "--family", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "no-matching");
    assert_eq!(v["seed"], 0);
    assert!(v["timing"]["millis"].is_u64());
}

#[test]
fn constructive_solvers_emit_traces() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.json");
    let trace = dir.path().join("trace.json");
    let out = rainbow(&[
        "--seed", "4", "generate", "--construction", "random-partite", "--n", "6", "--k", "3", "--sizes", "37,37",
        "--out", path(&file),
    ]);
    assert!(out.status.success());

    let out = rainbow(&["--json", "solve", "--family", path(&file), "--algorithm", "recursive", "--trace", path(&trace)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "matching");
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t["algorithm"], "recursive");
    assert!(!t["events"].as_array().unwrap().is_empty());

    // the threshold construction has no matching, so the algorithm must decline
    let small = dir.path().join("small.json");
    rainbow(&["generate", "--construction", "partite-threshold", "--n", "4", "--k", "3", "--t", "2", "--out", path(&small)]);
    let out = rainbow(&["--json", "solve", "--family", path(&small), "--algorithm", "recursive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "hypothesis-violated");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = rainbow(&["solve", "--family", path(&dir.path().join("missing.json"))]);
    assert_eq!(out.status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"universe":4,"partite":null,"families":[{"k":2,"edges":[[1,5]]}]}"#).unwrap();
    let out = rainbow(&["solve", "--family", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("families[0].edges[0]"));

    let out = rainbow(&["check-inequality", "--lemma", "3.4", "--n", "500", "--ks", "2,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("tight.json");
    rainbow(&["generate", "--construction", "theorem13-tight", "--n", "8", "--ks", "3,3,3", "--out", path(&file)]);
    let out = rainbow(&["--json", "solve", "--family", path(&file), "--node-budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["verdict"], "budget-exceeded");
}

#[test]
fn verify_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let out = rainbow(&[
        "--seed", "1", "--quiet", "verify", "--target", "lemma21", "--n", "5..7", "--t", "2..3", "--trials", "100",
        "--report", path(&report),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines[0]["kind"], "manifest");
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|c| c["kind"] == "cell" && c["refutations"] == 0));
}

#[test]
fn reports_are_reproducible_across_thread_counts() {
    let run = |threads: &str| {
        let out = rainbow(&[
            "--seed", "9", "--threads", threads, "--json", "verify", "--target", "theorem12", "--n", "4..6", "--t",
            "2", "--trials", "30",
        ]);
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| {
                let mut v: Value = serde_json::from_str(l).unwrap();
                strip_timing(&mut v);
                if let Some(m) = v.as_object_mut() {
                    m.remove("threads");
                }
                serde_json::to_string(&v).unwrap()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn inequality_checks() {
    let out = rainbow(&["--json", "check-inequality", "--lemma", "3.2", "--t", "3", "--n", "1000", "--k1", "2", "--k2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value"].as_f64().unwrap() + 0.8394).abs() < 1e-3);

    let out = rainbow(&["--json", "check-inequality", "--lemma", "3.4", "--n", "100000", "--ks", "2x44000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["check"]["comparison"], "holds");
    assert_eq!(v["check"]["in_range"], true);
}

#[test]
fn nu_and_search() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("clique.json");
    rainbow(&["generate", "--construction", "clique", "--n", "7", "--k", "2", "--t", "3", "--out", path(&file)]);
    let out = rainbow(&["--json", "nu", "--family", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["nu"], 2);

    let out = rainbow(&["--json", "--seed", "3", "search", "--n", "5", "--ks", "2,2", "--budget", "3000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["solver_confirmed"], true);
    // two stars at one vertex reach 4·4; nothing below it is worth reporting
    assert!(v["product"].as_str().unwrap().parse::<u64>().unwrap() >= 16);
}
