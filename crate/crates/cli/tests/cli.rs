use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_structsched")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn value(path: &Path, algo: &str, extra: &[&str]) -> u64 {
    let mut args = vec!["solve", s(path), "--algo", algo];
    args.extend_from_slice(extra);
    json(&run(&args))["value"].as_u64().unwrap()
}

fn generated(dir: &TempDir, class: &str, seed: &str) -> PathBuf {
    let path = dir.path().join(format!("{class}-{seed}.json"));
    let out = run(&["gen", "--class", class, "--seed", seed, "-n", "6", "-m", "3", "-o", s(&path)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn brute_on_one_by_one() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "one.json", r#"{"jobs":["a"],"machines":["x"],"proc":{"x":{"a":7}}}"#);
    let out = json(&run(&["solve", s(&path), "--algo", "brute"]));
    assert_eq!(out["value"], 7);
    assert_eq!(out["schedule"]["a"], "x");
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert!(run(&["gen", "--class", "nested", "--seed", "7", "-o", s(p)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let stdout = run(&["gen", "--class", "nested", "--seed", "7"]).stdout;
    assert_eq!(stdout, std::fs::read(&a).unwrap());
}

#[test]
fn ptas_within_factor_of_brute() {
    let dir = TempDir::new().unwrap();
    for seed in ["7", "8", "9"] {
        let path = generated(&dir, "nested", seed);
        let opt = value(&path, "brute", &[]);
        let v = value(&path, "ptas-rw", &["--eps", "0.5"]);
        assert!(opt <= v && 2 * v <= 3 * opt, "seed {seed}: {v} vs {opt}");
    }
}

#[test]
fn exact_algorithms_agree() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "tree_hierarchical", "3");
    let opt = value(&path, "brute", &[]);
    for algo in ["machine-dp", "load-dp", "tw-primal", "tw-dual", "tw-incidence", "edge-dp"] {
        assert_eq!(value(&path, algo, &[]), opt, "{algo}");
    }
    for (algo, extra) in [("fptas-m", vec!["--eps", "1/5"]), ("fptas-tw", vec!["--eps", "0.2", "--graph", "dual"])] {
        let v = value(&path, algo, &extra);
        assert!(opt <= v && 5 * v <= 6 * opt, "{algo}");
    }
}

#[test]
fn decompositions_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "graph_balancing", "5");
    let opt = value(&path, "brute", &[]);

    let td = run(&["decomp", "tree", s(&path), "--graph", "dual", "--method", "exact"]);
    assert!(td.status.success());
    let td_path = write(&dir, "td.json", &String::from_utf8(td.stdout).unwrap());
    let report = json(&run(&["decomp", "validate", s(&path), s(&td_path), "--graph", "dual"]));
    assert_eq!(report["valid"], true);
    let solved = json(&run(&["solve", s(&path), "--algo", "tw-dual", "--decomp", s(&td_path)]));
    assert_eq!(solved["value"].as_u64(), Some(opt));
    assert_eq!(solved["width"], report["width"]);

    let bd = run(&["decomp", "branch", s(&path), "--caterpillar"]);
    assert!(bd.status.success());
    let bd_path = write(&dir, "bd.json", &String::from_utf8(bd.stdout).unwrap());
    assert_eq!(json(&run(&["decomp", "validate", s(&path), s(&bd_path)]))["kind"], "branch");
    assert_eq!(value(&path, "edge-dp", &["--decomp", s(&bd_path)]), opt);

    // A tree decomposition is not a branch decomposition.
    assert_eq!(run(&["decomp", "validate", s(&path), s(&td_path)]).status.code(), Some(3));
}

#[test]
fn graph_outputs() {
    let dir = TempDir::new().unwrap();
    let path = generated(&dir, "path_hierarchical", "2");
    let stats = json(&run(&["graph", s(&path)]));
    assert_eq!(stats["jobs"], 6);
    assert_eq!(stats["incidence"]["vertices"], 9);
    let dot = run(&["graph", s(&path), "--dot", "incidence"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph incidence {"));
}

#[test]
fn bench_emits_json_lines() {
    let out = run(&["bench", "--seed-to", "4", "--classes", "nested,random_unrelated"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 8);
    for line in text.lines() {
        let rec: Value = serde_json::from_str(line).unwrap();
        assert_eq!(rec["ok"], true, "{line}");
    }
}

#[test]
fn validate_reports_class_violations() {
    let dir = TempDir::new().unwrap();
    let crossing = write(
        &dir,
        "crossing.json",
        r#"{"jobs":["a","b"],"machines":["x","y","z"],"identical":true,
            "proc":{"x":{"a":1},"y":{"a":1,"b":1},"z":{"b":1}}}"#,
    );
    let out = run(&["validate", s(&crossing), "--class", "nested"]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"]["verdict"], "fail");
    assert_eq!(json(&run(&["validate", s(&crossing), "--class", "graph_balancing"]))["verdict"]["verdict"], "pass");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let stranded = write(&dir, "stranded.json", r#"{"jobs":["a","b"],"machines":["x"],"proc":{"x":{"a":1}}}"#);
    assert_eq!(run(&["solve", s(&stranded), "--algo", "brute"]).status.code(), Some(1));

    let big = dir.path().join("big.json");
    assert!(run(&["gen", "--class", "random_unrelated", "-n", "40", "-m", "6", "-o", s(&big)]).status.success());
    assert_eq!(run(&["solve", s(&big), "--algo", "brute"]).status.code(), Some(2));

    let small = generated(&dir, "nested", "1");
    assert_eq!(run(&["solve", "/no/such/file.json", "--algo", "brute"]).status.code(), Some(3));
    assert_eq!(run(&["solve", s(&small), "--algo", "simplex"]).status.code(), Some(3));
    assert_eq!(run(&["solve", s(&small), "--algo", "fptas-m"]).status.code(), Some(3));
    assert_eq!(run(&["solve", s(&small), "--algo", "ptas-rw", "--eps", "0"]).status.code(), Some(3));
    let garbage = write(&dir, "garbage.json", "{not json");
    assert_eq!(run(&["solve", s(&garbage), "--algo", "brute"]).status.code(), Some(3));
}
