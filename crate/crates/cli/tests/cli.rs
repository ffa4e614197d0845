use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn semistream(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semistream"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = semistream(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_graph_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tsv");
    let b = dir.path().join("b.tsv");
    let c = dir.path().join("c.tsv");
    ok(&["bench", "gen-graph", "--model", "er", "--n", "25", "--p", "0.3", "--seed", "4", "--out", p(&a)]);
    ok(&["bench", "gen-graph", "--model", "er", "--n", "25", "--p", "0.3", "--seed", "4", "--out", p(&b)]);
    ok(&["bench", "gen-graph", "--model", "er", "--n", "25", "--p", "0.3", "--seed", "5", "--out", p(&c)]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());

    let ws = ok(&["bench", "gen-graph", "--model", "ws", "--n", "20", "--kring", "4", "--beta", "0.2"]);
    let edges = ws.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).count();
    assert_eq!(edges, 40);
}

#[test]
fn gen_graph_requires_model_parameters() {
    let out = semistream(&["bench", "gen-graph", "--model", "ws", "--n", "20", "--kring", "4"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--beta"));
}

#[test]
fn run_stream_reports_a_feasible_solution_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.tsv");
    let constraint = dir.path().join("c.json");
    let trace = dir.path().join("t.csv");
    ok(&["bench", "gen-graph", "--model", "er", "--n", "30", "--p", "0.2", "--seed", "1", "--out", p(&graph)]);
    fs::write(&constraint, r#"{"type": "cardinality", "rho": 4}"#).unwrap();
    for algo in ["threshold_sieve", "adaptive_sieve", "framework", "sieve_streaming", "preemption"] {
        let stdout = ok(&[
            "run-stream",
            "--graph",
            p(&graph),
            "--objective",
            "cut",
            "--constraint",
            p(&constraint),
            "--algo",
            algo,
            "--trace",
            p(&trace),
        ]);
        let summary: Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(summary["algorithm"], algo);
        assert!(summary["solution"].as_array().unwrap().len() <= 4);
        assert!(summary["value"].as_f64().unwrap() > 0.0);
        assert!(summary["violations"].as_array().unwrap().is_empty());
        let csv = fs::read_to_string(&trace).unwrap();
        assert!(csv.starts_with("step,event,element,bucket,value"));
    }
}

#[test]
fn run_stream_rejects_mismatched_elements() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.tsv");
    let constraint = dir.path().join("c.json");
    fs::write(&graph, "0\t1\n1\t2\n").unwrap();
    fs::write(&constraint, r#"{"type": "planarity"}"#).unwrap();
    let out = semistream(&[
        "run-stream",
        "--graph",
        p(&graph),
        "--objective",
        "cut",
        "--constraint",
        p(&constraint),
        "--algo",
        "threshold_sieve",
    ]);
    assert!(!out.status.success());
    let out = semistream(&[
        "run-stream",
        "--graph",
        p(&graph),
        "--objective",
        "edge-linear",
        "--constraint",
        p(&constraint),
        "--algo",
        "no_such_algorithm",
    ]);
    assert!(!out.status.success());
}

#[test]
fn bench_run_writes_sorted_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("results.csv");
    fs::write(
        &cfg,
        r#"{
            "instance": {"kind": "watts_strogatz", "n": 30, "k_ring": 4, "beta": 0.1},
            "objective": "linear",
            "constraint": {"type": "knapsack", "budget": 1.0, "costs": {"rule": "random_int"}},
            "algorithms": ["threshold_sieve", "streaming_greedy"],
            "seeds": [0, 1, 2],
            "timing": false
        }"#,
    )
    .unwrap();
    ok(&["bench", "run", "--config", p(&cfg), "--out", p(&out)]);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("algorithm,sweep,seed,value,oracle_calls,peak_elements,ms"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], "streaming_greedy");
    assert_eq!(rows[3][0], "threshold_sieve");
    assert!(rows.iter().all(|r| r[1].is_empty()));

    // Same config, same bytes.
    let again = dir.path().join("again.csv");
    ok(&["bench", "run", "--config", p(&cfg), "--out", p(&again)]);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

#[test]
fn bench_run_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"instance": {"kind": "erdos_renyi", "n": 10, "p": 0.5}, "objective": "cut",
            "constraint": {"type": "cardinality", "rho": 2}, "algorithms": ["framework"],
            "seeds": [0], "colour": "blue"}"#,
    )
    .unwrap();
    assert!(!semistream(&["bench", "run", "--config", p(&cfg)]).status.success());
}

#[test]
fn counterexample_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    ok(&["counterexample", "--family", "g1", "--rho", "4", "--epsilon", "0.01", "--out", p(&out)]);
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["rho"], 4);
    assert!((report["f_S"].as_f64().unwrap() - 8.04).abs() < 1e-9);
    assert_eq!(report["f_opt"], 16.0);
    assert_eq!(report["holds"], true);

    let g2: Value = serde_json::from_str(&ok(&["counterexample", "--family", "g2", "--rho", "4"])).unwrap();
    assert!((g2["f_S"].as_f64().unwrap() - 9.765625).abs() < 1e-9);
    assert!(g2["epsilon"].is_null());

    assert!(!semistream(&["counterexample", "--family", "g2", "--rho", "3"]).status.success());
    assert!(!semistream(&["counterexample", "--family", "g2", "--rho", "5", "--epsilon", "0.1"]).status.success());
}
