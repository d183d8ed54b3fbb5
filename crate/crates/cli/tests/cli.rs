use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const MINIMAL: &str = r#"
seed = 11

[model]
d = 2
alpha = 4.0
intensity = 1.0
weights = { kind = "pareto", tau = 2.5 }

[geometry]
side = 24.0

[cc]
m = 8.0
delta = 0.1

[palm]
replicas = 40
side = 20.0
"#;

fn sfperc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sfperc"))
        .current_dir(dir)
        .env_remove("SFPERC_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("exp.toml"), MINIMAL).unwrap();
    dir
}

fn report(dir: &Path, out: &str, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(out).join(format!("report-{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn strip_runtimes(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("runtime_ms");
            map.values_mut().for_each(strip_runtimes);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_runtimes),
        _ => {}
    }
}

fn record<'a>(report: &'a Value, op: &str) -> &'a Value {
    report["records"].as_array().unwrap().iter().find(|r| r["operation"] == op).unwrap()
}

#[test]
fn sample_writes_points_and_report() {
    let dir = setup();
    let out = sfperc(dir.path(), &["sample", "--config", "exp.toml", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (ps, weights) = sfperc::io::read_points(BufReader::new(File::open(dir.path().join("o/points.jsonl")).unwrap())).unwrap();
    let r = report(dir.path(), "o", "sample");
    assert_eq!(record(&r, "sample")["value"].as_u64().unwrap() as usize, ps.len());
    assert_eq!(weights.unwrap().1.len(), ps.len());
    let names: Vec<&str> = r["artifacts"].as_array().unwrap().iter().map(|a| a["path"].as_str().unwrap()).collect();
    assert_eq!(names, ["config.toml", "points.jsonl"]);
}

#[test]
fn report_is_deterministic_and_reproducible() {
    let dir = setup();
    let run = |args: &[&str]| {
        let o = sfperc(dir.path(), args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut r = report(dir.path(), "a", "report");
        strip_runtimes(&mut r);
        r
    };
    let a = run(&["report", "--config", "exp.toml", "--out", "a"]);
    let b = run(&["report", "--config", "exp.toml", "--out", "a"]);
    let c = run(&["report", "--config", "exp.toml", "--out", "a", "--threads", "1"]);
    assert_eq!(a, b);
    assert_eq!(a, c);

    // re-derive three entries from the recorded config and seeds
    std::fs::write(dir.path().join("echo.toml"), std::fs::read(dir.path().join("a/config.toml")).unwrap()).unwrap();
    for (command, op) in [("cc", "truncated_cc"), ("palm-cc", "palm_cc_estimate"), ("components", "connected_components")] {
        let o = sfperc(dir.path(), &[command, "--config", "echo.toml", "--out", "re"]);
        assert!(o.status.success());
        assert_eq!(record(&report(dir.path(), "re", command), op)["value"], record(&a, op)["value"], "{op}");
    }
}

#[test]
fn graph_export_round_trips() {
    let dir = setup();
    let o = sfperc(dir.path(), &["graph", "--config", "exp.toml", "--out", "g", "--engine", "naive"]);
    assert!(o.status.success());
    let g = sfperc::io::read_graph(BufReader::new(File::open(dir.path().join("g/graph.jsonl")).unwrap())).unwrap();
    let r = report(dir.path(), "g", "graph");
    assert_eq!(record(&r, "graph")["value"]["edges"].as_u64().unwrap() as usize, g.edge_count());
    assert_eq!(g.engine(), sfperc::Engine::Naive);
    let o = sfperc(dir.path(), &["graph", "--config", "exp.toml", "--out", "h"]);
    assert!(o.status.success());
    let h = sfperc::io::read_graph(BufReader::new(File::open(dir.path().join("h/graph.jsonl")).unwrap())).unwrap();
    assert_eq!(g.adjacency(), h.adjacency());
}

#[test]
fn csv_tables_and_overrides() {
    let dir = setup();
    let o = sfperc(dir.path(), &["tail", "--config", "exp.toml", "--out", "t", "--format", "csv", "--k", "12", "--seed", "5"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("t/tail.csv")).unwrap();
    assert!(csv.starts_with("s,ccdf\n"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 2));
    let r = report(dir.path(), "t", "tail");
    assert_eq!(r["config"]["seed"], 5);
    assert_eq!(record(&r, "hill_gamma")["params"]["k"], 12);
    assert!(record(&r, "hill_gamma").get("warning").is_none());
    let o = sfperc(dir.path(), &["degrees", "--config", "exp.toml", "--out", "t", "--format", "csv"]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(dir.path().join("t/degrees.csv")).unwrap().starts_with("degree,count\n"));
}

#[test]
fn infinite_degree_regime_warns_instead_of_failing() {
    let dir = setup();
    let o = sfperc(dir.path(), &["tail", "--config", "exp.toml", "--out", "w", "--alpha", "1.5", "--side", "12"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path(), "w", "tail");
    assert_eq!(r["regime"]["regime"]["kind"], "infinite_degree_a");
    assert!(record(&r, "hill_gamma")["warning"].as_str().unwrap().contains("InfiniteDegreeA"));
}

#[test]
fn invalid_config_exits_1() {
    let dir = setup();
    std::fs::write(dir.path().join("bad.toml"), "[model]\nd = 2\n").unwrap();
    assert_eq!(sfperc(dir.path(), &["sample", "--config", "bad.toml"]).status.code(), Some(1));
    assert_eq!(sfperc(dir.path(), &["sample", "--config", "missing.toml"]).status.code(), Some(1));
    assert_eq!(sfperc(dir.path(), &["cc", "--config", "exp.toml", "--delta", "0.6"]).status.code(), Some(1));
    assert_eq!(sfperc(dir.path(), &["sample", "--config", "exp.toml", "--tau", "0.9"]).status.code(), Some(1));
    let text = MINIMAL.replace("seed = 11", "seed = 11\nunknown = 3");
    std::fs::write(dir.path().join("extra.toml"), text).unwrap();
    assert_eq!(sfperc(dir.path(), &["sample", "--config", "extra.toml"]).status.code(), Some(1));
}

#[test]
fn output_directory_from_environment() {
    let dir = setup();
    let o = Command::new(env!("CARGO_BIN_EXE_sfperc"))
        .current_dir(dir.path())
        .env("SFPERC_OUT", "from-env")
        .args(["components", "--config", "exp.toml"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("from-env/report-components.json").exists());
}

#[test]
fn validate_fast_and_corruption_hook() {
    let dir = setup();
    let ok = sfperc(dir.path(), &["validate", "--out", "v"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = sfperc(dir.path(), &["validate", "--out", "v", "--corrupt-adjacency"]);
    assert_eq!(bad.status.code(), Some(2));
    let stdout = String::from_utf8_lossy(&bad.stdout);
    assert!(stdout.contains("asymmetric adjacency"), "{stdout}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("v/validation.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
}
