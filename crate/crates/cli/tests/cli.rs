//! The `hardy` binary: exit codes, report contents and reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

use hardy_cli::strip_timestamps;
use serde_json::Value;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("hardy-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Self(dir)
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).output().unwrap()
}

fn run(command: &str, config: &PathBuf, extra: &[&str]) -> Output {
    let mut args = vec![command, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    hardy(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn quantity(report: &Value, name: &str) -> f64 {
    report["quantities"]
        .as_array()
        .unwrap()
        .iter()
        .find(|q| q["name"] == name)
        .unwrap_or_else(|| panic!("no quantity {name}"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn identity_symbol_passes_brown_halmos() {
    let s = Scratch::new("toeplitz");
    let cfg = s.file(
        "c.json",
        r#"{"seed": 11, "symbol": [[0, 1, 0]], "x": {"lebesgue": {"p": 2}}, "y": {"lebesgue": {"p": 2}},
            "budgets": {"n": 256, "d": 8, "r": 4}}"#,
    );
    let out = run("toeplitz", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert!((quantity(&r, "multiplier_norm") - 1.0).abs() < 1e-12);
    assert!((quantity(&r, "toeplitz_norm") - 1.0).abs() < 1e-9);
    assert_eq!(r["verdict"], "pass");
    for q in r["quantities"].as_array().unwrap() {
        assert!(q["mode"].is_string(), "untagged number {q}");
    }
}

#[test]
fn spaces_reports_the_lebesgue_multiplier() {
    let s = Scratch::new("spaces");
    let cfg = s.file("c.json", r#"{"seed": 1, "x": {"lebesgue": {"p": 4}}, "y": {"lebesgue": {"p": 2}}}"#);
    let out = run("spaces", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let m = r["facts"].as_array().unwrap().iter().find(|f| f["name"] == "multiplier_space").unwrap();
    assert_eq!(m["value"], "L^4");
}

#[test]
fn malformed_space_tag_exits_with_two() {
    let s = Scratch::new("malformed");
    let cfg = s.file("c.json", r#"{"seed": 1, "x": {"lebesque": {"p": 2}}, "y": {"lebesgue": {"p": 2}}}"#);
    let out = run("spaces", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[parse]"));
}

#[test]
fn config_errors_have_distinct_diagnostics() {
    let s = Scratch::new("diagnostics");
    let no_seed = s.file("a.json", r#"{"symbol": [[0, 1, 0]]}"#);
    let out = run("norm", &no_seed, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    let overflow = s.file("b.json", r#"{"seed": 1, "budgets": {"n": 64, "d": 40}}"#);
    let out = run("norm", &overflow, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[budget]"));

    let out = run("norm", &s.0.join("missing.json"), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[io]"));

    let out = hardy(&["frobnicate", "--config", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_and_csv_is_written() {
    let s = Scratch::new("csv");
    let cfg = s.file("c.json", r#"{"symbol": {"hilbert": {"terms": 24}}, "sweep": [4, 8, 16], "budgets": {"n": 256, "dc": 16}}"#);
    let csv = s.0.join("out.csv");
    let out = run("nehari-l2", &cfg, &["--seed", "5", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["config"]["seed"], 5);
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("command,name,value,mode,slack"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("nehari-l2,sigma_max[M=4],"));
    assert!(rows[3].contains(",upper-bound,"));
}

#[test]
fn reports_are_reproducible() {
    let s = Scratch::new("repro");
    let cfg = s.file(
        "c.json",
        r#"{"seed": 42, "symbol": {"random": {"lo": -3, "hi": 3}}, "x": {"lebesgue": {"p": 3}},
            "y": {"lorentz": {"p": 2, "q": 1}}, "budgets": {"n": 128, "d": 6, "r": 3}}"#,
    );
    let a = run("toeplitz", &cfg, &[]);
    let b = run("toeplitz", &cfg, &[]);
    assert_eq!(a.status.code(), b.status.code());
    let (a, b) = (String::from_utf8(a.stdout).unwrap(), String::from_utf8(b.stdout).unwrap());
    assert_eq!(strip_timestamps(&a), strip_timestamps(&b));
    assert!(!strip_timestamps(&a).contains("wall_time_s"));
}

#[test]
fn zero_symbol_is_compact() {
    let s = Scratch::new("noncompact");
    let cfg = s.file("c.json", r#"{"seed": 1, "symbol": [], "y": {"lebesgue": {"p": 2}}, "budgets": {"n": 64, "d": 8, "dc": 8}}"#);
    let out = run("noncompact", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(quantity(&json(&out), "noncompactness_bound"), 0.0);
}
