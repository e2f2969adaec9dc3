//! The binary: exit codes, determinism, config precedence and threads.

use std::path::Path;
use std::process::{Command, Output};

use zetascope::io::{from_json, LengthSpectrumDoc, PointDoc};

fn zetascope(args: &[&str], dir: &Path, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zetascope"));
    cmd.args(args).current_dir(dir).env_remove("ZETASCOPE_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = zetascope(args, dir, &[]);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str], dir: &Path) -> i32 {
    zetascope(args, dir, &[]).status.code().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&["--space", "RH2", "space"], d), 0);
    assert_eq!(code(&["--space", "RH3", "space"], d), 2);
    assert_eq!(code(&["--bogus"], d), 2);
    assert_eq!(code(&["--space", "RH2", "--grid", "3:0.5:100", "dual-theta"], d), 2);
    assert_eq!(code(&["--space", "RH2", "--lengths", "missing.json", "theta", "residues"], d), 2);
    assert_eq!(code(&["--space", "RH2", "--tol", "-1", "space"], d), 2);
    assert_eq!(code(&["--space", "OH2", "branch", "--gamma", "l3"], d), 4);
    // an unreachable tolerance fails the check
    assert_eq!(code(&["--space", "RH2", "--tol", "1e-30", "trace-check", "--dual-surrogate", "50", "--side", "dual", "--gaussian", "1,0.2"], d), 3);
    assert_eq!(code(&["--help"], d), 0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["--space", "CH2", "--sigma", "pq:1,0", "selberg", "divisor", "--chiM", "6"][..],
        &["--space", "RH4", "--grid", "0.2:2:17", "--format", "csv", "dual-theta"][..],
        &["--space", "QH2", "--sigma", "sigma1", "sigma"][..],
    ] {
        assert_eq!(ok(args, d), ok(args, d));
    }
}

#[test]
fn divisor_json_is_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["--space", "RH2", "selberg", "divisor", "--chiM", "-2", "--window", "-6:0,-1:1"], dir.path());
    let pts: Vec<PointDoc> = from_json(&text).unwrap();
    assert_eq!(pts.len(), 6);
    for (k, p) in pts.iter().rev().enumerate() {
        assert_eq!(p.re, -(k as f64 + 0.5));
        assert_eq!(p.order, 4 * k as i64 + 2);
    }
}

#[test]
fn csv_has_header_and_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["--space", "RH2", "--grid", "0.5:3:100", "--format", "csv", "dual-theta"], dir.path());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,Re,Im,flag");
    assert_eq!(lines.len(), 101);
    let rect = ok(&["--space", "RH2", "--grid", "0.5:1:3,-1:1:2", "--format", "csv", "dual-theta"], dir.path());
    assert!(rect.starts_with("t_re,t_im,Re,Im,flag\n"));
    assert_eq!(rect.lines().count(), 7);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("run.json"), r#"{"space": "RH4", "sigma": "forms:p=1", "format": "csv", "grid": "1:2:3"}"#).unwrap();
    let from_file = ok(&["--config", "run.json", "dual-theta"], d);
    assert!(from_file.starts_with("t,Re,Im,flag"));
    let overridden = ok(&["--config", "run.json", "--format", "json", "--space", "RH2", "--sigma", "trivial", "dual-theta"], d);
    let direct = ok(&["--space", "RH2", "--grid", "1:2:3", "dual-theta"], d);
    assert_eq!(overridden, direct);
    std::fs::write(d.join("bad.json"), r#"{"space": "RH4", "colour": "blue"}"#).unwrap();
    assert_eq!(code(&["--config", "bad.json", "space"], d), 2);
}

#[test]
fn generated_spectrum_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["lengths", "gen-fuchsian", "--max-length", "3.5", "--max-word", "6", "-o", "bolza.json"], d);
    let doc: LengthSpectrumDoc = from_json(&std::fs::read_to_string(d.join("bolza.json")).unwrap()).unwrap();
    let sp = doc.to_spectrum().unwrap();
    assert_eq!(sp.classes.len(), 24);
    assert!((sp.min_length().unwrap() - 3.05714).abs() < 1e-4);
    let residues = ok(&["--lengths", "bolza.json", "theta", "residues"], d);
    assert_eq!(from_json::<Vec<serde_json::Value>>(&residues).unwrap().len(), 48);
    ok(&["--lengths", "bolza.json", "selberg", "eval", "--s", "2.5+0.3i"], d);
    ok(&["--lengths", "bolza.json", "ruelle", "eval", "--s", "3"], d);
    assert_eq!(code(&["--lengths", "bolza.json", "--space", "RH4", "theta", "residues"], d), 2);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["lengths", "gen-fuchsian", "--max-length", "3.5", "--max-word", "6"];
    let one = zetascope(&args, d, &[("ZETASCOPE_THREADS", "1")]);
    let three = zetascope(&args, d, &[("ZETASCOPE_THREADS", "3")]);
    assert!(one.status.success() && three.status.success());
    assert_eq!(one.stdout, three.stdout);
    let flag = zetascope(&["--threads", "2", "lengths", "gen-fuchsian", "--max-length", "3.5", "--max-word", "6"], d, &[("ZETASCOPE_THREADS", "junk")]);
    assert_eq!(flag.stdout, one.stdout);
    assert_eq!(zetascope(&args, d, &[("ZETASCOPE_THREADS", "junk")]).status.code(), Some(2));
}

#[test]
fn functional_equation_checks() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let fe: serde_json::Value = from_json(&ok(&["--space", "RH2", "selberg", "fe-check", "--s", "0.3", "--chiM", "-2"], d)).unwrap();
    assert_eq!(fe["pass"], true);
    let r: serde_json::Value = from_json(&ok(&["--space", "RH2", "ruelle", "fe-check", "--s", "0.61+0.2i", "--chiM", "-2"], d)).unwrap();
    let off = r["offset"].as_f64().unwrap();
    assert!((off - r["expected_offset"].as_f64().unwrap()).abs() < 1e-7);
    let o: serde_json::Value = from_json(&ok(&["--space", "RH2", "ruelle", "order0", "--chiM", "-2"], d)).unwrap();
    assert_eq!(o["order"], -2);
}

#[test]
fn catalog_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = ok(&["--space", "RH4", "catalog", "real-forms", "--p", "1", "--betti", "1,3,8,3,1", "--chiM", "4", "--window", "-1:1,-1:1"], d);
    let pts: Vec<PointDoc> = from_json(&text).unwrap();
    let order = |x: f64| pts.iter().find(|p| p.re == x).map_or(0, |p| p.order);
    assert_eq!(order(0.5), 2);
    assert_eq!(order(-0.5), 6);
    std::fs::write(d.join("eig.json"), r#"[{"value": 3.25, "mult": 2}]"#).unwrap();
    let text = ok(&["--space", "CH2", "catalog", "complex-forms", "--p", "0", "--q", "1", "--hodge", "1,2;3", "--chiM", "3", "--eigen", "eig.json"], d);
    assert!(!from_json::<Vec<PointDoc>>(&text).unwrap().is_empty());
    ok(&["--space", "QH2", "catalog", "quat-sigma1", "--chiM", "-3"], d);
    assert_eq!(code(&["--space", "RH4", "catalog", "real-forms", "--p", "1", "--betti", "1,3,8,3", "--chiM", "4"], d), 2);
    assert_eq!(code(&["--space", "CH2", "catalog", "complex-forms", "--p", "0", "--q", "0", "--hodge", "1", "--chiM", "1"], d), 2);
}

#[test]
fn branch_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v: serde_json::Value = from_json(&ok(&["--space", "RH4", "branch", "--gamma", "s+*l1 - s-*l1"], d)).unwrap();
    assert_eq!(v["restriction"], "0");
    let v: serde_json::Value = from_json(&ok(&["--space", "QH2", "--sigma", "sigma1", "branch", "--lift"], d)).unwrap();
    assert_eq!(v["restriction"], "m1*q");
    assert_eq!(code(&["--space", "CH2", "branch", "--gamma", "l1", "--cover", "2"], d), 2);
}
