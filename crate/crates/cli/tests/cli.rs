use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_shortpsi"));
    for (k, _) in std::env::vars() {
        if k.starts_with("SHORTPSI_") {
            c.env_remove(k);
        }
    }
    c
}

fn zeros_file() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros_100k.txt")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const SMALL_GRID: &[&str] = &["--x-grid", "log:4:2e4:1e5", "--h-rule", "sqrt(x)*log(x)", "--h-rule", "x"];

#[test]
fn zeros_validate_small_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "z.txt", "14.134725142\n21.022039639\n25.010857580\n");
    let o = run(&["zeros", "validate", "--zeros", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("count = 3"));
    assert!(stderr(&o).contains("summary: count=3"));
}

#[test]
fn zeros_out_of_order() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "z.txt", "14.134725142\n25.010857580\n21.022039639\n");
    let o = run(&["zeros", "validate", "--zeros", p.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert!(stderr(&o).contains("summary: status=error"));
}

#[test]
fn zeros_stats_full_table() {
    let o = run(&["zeros", "stats", "--zeros", zeros_file().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("count = 100000"), "{out}");
    assert!(out.contains("gamma_max = 7.49208"), "{out}");
    assert!(out.contains("N(100) = 29 "), "{out}");
}

#[test]
fn grid_below_domain_is_config_invalid() {
    let o = run(&["verify-theorem", "--x-grid", "1000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config-invalid"), "{}", stderr(&o));
}

#[test]
fn short_h_rule_is_config_invalid() {
    let o = run(&["verify-theorem", "--x-grid", "log:3:2e4:1e5", "--h-rule", "x^0.4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config-invalid"));
}

#[test]
fn capacity_exceeded_reports_limit() {
    let mut args = vec!["verify-theorem", "--sieve-limit", "1000"];
    args.extend_from_slice(SMALL_GRID);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("capacity-exceeded") && e.contains("200001"), "{e}");
}

#[test]
fn small_grid_passes_and_encodings_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    let z = zeros_file();
    for (fmt, out) in [("csv", &csv), ("json", &json)] {
        let mut args = vec!["verify-theorem", "--zeros", z.to_str().unwrap(), "--format", fmt];
        args.extend_from_slice(SMALL_GRID);
        args.extend_from_slice(&["--out", out.to_str().unwrap()]);
        let o = run(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        let e = stderr(&o);
        assert!(e.contains("points=8 passed=8 violations=0"), "{e}");
        assert!(e.contains("audit_violations=0"), "{e}");
    }
    let csv = std::fs::read_to_string(csv).unwrap();
    let json: Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 13);
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for (line, row) in lines.zip(rows) {
        for (k, cell) in header.iter().zip(line.split(',')) {
            match &row[*k] {
                Value::Bool(b) => assert_eq!(cell, b.to_string()),
                Value::Number(n) => {
                    let c: f64 = cell.parse().unwrap();
                    assert_eq!(c, n.as_f64().unwrap(), "{k}");
                }
                Value::Null => assert_eq!(cell, "NaN"),
                other => panic!("{k}: {other}"),
            }
        }
    }
    assert_eq!(json["metadata"]["zeros"]["count"], 100000);
    assert_eq!(json["metadata"]["timestamp"], Value::Null);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let z = zeros_file();
    let mut outs = Vec::new();
    for (i, workers) in ["1", "3"].iter().enumerate() {
        let p = dir.path().join(format!("r{i}.json"));
        let mut args = vec!["verify-theorem", "--zeros", z.to_str().unwrap(), "--format", "json"];
        args.extend_from_slice(SMALL_GRID);
        args.extend_from_slice(&["--workers", workers, "--out", p.to_str().unwrap()]);
        assert!(run(&args).status.success());
        outs.push(std::fs::read(p).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.cfg",
        "x_grid = 1000\nh_rule = x\nformat = json\n",
    );
    // The file's grid is out of domain; the flag replaces it.
    let o = run(&["verify-theorem", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify-theorem", "--config", cfg.to_str().unwrap(), "--x-grid", "30000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0]["x"], 30000.5);
    assert_eq!(v["rows"][0]["h"], 30000.5);
}

#[test]
fn env_overrides() {
    let o = bin()
        .args(["verify-theorem", "--h-rule", "x"])
        .env("SHORTPSI_X_GRID", "25000")
        .env("SHORTPSI_FORMAT", "csv")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("2.50005000000e4,"));
}

#[test]
fn explicit_formula_runs() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let o = run(&["explicit", "--x", "1000.5", "--t", "5000", "--zeros", z]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("status=pass"));
    let o = run(&["explicit", "--x", "1000", "--zeros", z]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("half-integer"));
    let o = run(&["explicit", "--x", "1000.5", "--t", "1e9", "--zeros", z]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exhausted"));
}

#[test]
fn check_lemma_dispatch() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let o = run(&["check-lemma", "5", "--t1", "100", "--t2", "1000", "--zeros", z]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["rhs"].as_str().unwrap().starts_with("2.976"));
    assert_eq!(v["pass"], true);

    let o = run(&["check-lemma", "3", "--x", "140", "--h", "20", "--delta", "14", "--zeros", z]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lemma3: gate violated"), "{}", stderr(&o));

    let e10 = 10f64.exp().to_string();
    let o = run(&["check-lemma", "E", "--x", &e10]);
    assert!(o.status.success(), "{}", stderr(&o));

    for id in ["4", "6"] {
        let o = run(&["check-lemma", id, "--x", "1e6", "--h", "1e4", "--delta", "1e3", "--zeros", z]);
        assert!(o.status.success(), "lemma {id}: {}", stderr(&o));
    }
    let o = run(&["check-lemma", "bt", "--x", "1e6", "--h", "1e4", "--delta", "1e3"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn gaps_scan() {
    let o = run(&["gaps", "--limit", "1e5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("p,q,gap,ratio\n2,3,1,"));
    assert!(stderr(&o).contains("max_gap=72"), "{}", stderr(&o));
}
