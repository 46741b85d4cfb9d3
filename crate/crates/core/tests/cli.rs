//! End-to-end tests of the `qmeixner` binary: outputs, exit codes and the
//! precision override.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qmeixner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmeixner"))
        .args(args)
        .env_remove(qmeixner::cli::PRECISION_ENV)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("invalid JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qmeixner-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn phi_at_minus_one_is_one() {
    let out = qmeixner(&["eval", "phi", "--gamma", "2", "--x", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["re"].as_f64(), Some(1.0));
    assert_eq!(v["im"].as_f64(), Some(0.0));
    assert!(v["value"].as_str().unwrap().starts_with("1.0000000000"));
}

#[test]
fn eval_matches_the_polynomial_closed_form() {
    // φ at γ = −q reduces to m_1.
    let m = json(&qmeixner(&["eval", "m", "--n", "1", "--x", "0.7", "--set", "case-ii"]));
    let p = json(&qmeixner(&["eval", "phi", "--gamma", "-0.5", "--x", "0.7", "--set", "case-ii", "--route", "definition"]));
    let (a, b) = (m["re"].as_f64().unwrap(), p["re"].as_f64().unwrap());
    assert!((a - b).abs() <= 1e-15 * a.abs(), "{a} vs {b}");
}

#[test]
fn precision_flag_wins_over_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qmeixner"));
        c.args(["eval", "mu", "--gamma", "2"]).args(args);
        match env {
            Some(v) => c.env(qmeixner::cli::PRECISION_ENV, v),
            None => c.env_remove(qmeixner::cli::PRECISION_ENV),
        };
        json(&c.output().unwrap())["precision"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 40);
    assert_eq!(run(Some("50"), &[]), 50);
    assert_eq!(run(Some("50"), &["--precision", "45"]), 45);
}

#[test]
fn input_errors_exit_with_two() {
    let bad = temp_file("bad.cfg", "precision = 40\nsuites = lemma21\nparam-set x\nq = 0.5\na = oops\nb = 0.2\n");
    for args in [
        vec!["suite", "--config", bad.to_str().unwrap()],
        vec!["suite", "--tol", "1e-40"],
        vec!["suite", "--suite", "no-such-suite"],
        vec!["suite", "--config", "/nonexistent/qmeixner.cfg"],
        vec!["eval", "phi", "--x", "1"],
        vec!["eval", "phi", "--gamma", "2", "--x", "1", "--route", "nope"],
    ] {
        let out = qmeixner(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let _ = std::fs::remove_file(bad);
}

#[test]
fn suite_report_has_the_stable_fields() {
    let out = qmeixner(&["suite", "--suite", "lemma21"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    let ids: Vec<&str> = checks.iter().map(|c| c["check_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted, "report is sorted by check id");
    for c in checks {
        for field in ["check_id", "anchor", "params", "lhs_mag", "rhs_mag", "residual", "cancellation", "pass", "millis"] {
            assert!(c.get(field).is_some(), "missing {field}");
        }
        assert_eq!(c["pass"], Value::Bool(true));
    }
}

#[test]
fn csv_report_goes_to_the_output_file() {
    let path = std::env::temp_dir().join(format!("qmeixner-cli-{}-report.csv", std::process::id()));
    let out = qmeixner(&["suite", "--suite", "qseries-identities", "--format", "csv", "--out", path.to_str().unwrap(), "--jobs", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("check_id,anchor,params,lhs_mag,rhs_mag,residual"));
    assert!(lines.all(|l| l.contains(",true,")));
    let _ = std::fs::remove_file(path);
}

#[test]
fn reports_are_deterministic() {
    let strip = |out: &Output| {
        let mut v = json(out);
        for c in v["checks"].as_array_mut().unwrap() {
            c["millis"] = Value::Null;
        }
        v
    };
    let a = strip(&qmeixner(&["suite", "--suite", "qseries-identities"]));
    let b = strip(&qmeixner(&["suite", "--suite", "qseries-identities", "--jobs", "1"]));
    assert_eq!(a, b);
}

#[test]
fn spectrum_lists_both_rays() {
    let out = qmeixner(&["spectrum", "--set", "case-ii"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let zeros = v[0]["zeros"].as_array().unwrap();
    let kinds: Vec<&str> = zeros.iter().map(|z| z["class"]["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"neg_q_n") && kinds.contains(&"pos_lattice"));
    assert!(!kinds.contains(&"unexplained"));
    assert!(v[0]["missed"].as_array().unwrap().is_empty());
}

#[test]
fn too_coarse_a_spectrum_scan_fails_with_one() {
    // One grid point per unit of log_q|γ| cannot resolve the zeros.
    let out = qmeixner(&["spectrum", "--set", "case-ii", "--per-unit", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)[0]["pass"], Value::Bool(false));
}

#[test]
fn scan_emits_one_row_per_check_and_step() {
    let out = qmeixner(&["scan", "--param", "b", "--from", "-1", "--to", "1", "--set", "case-ii", "--suite", "lemma21"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(text.lines().next().unwrap(), "step,value,check_id,residual,tolerance,status,note");
    for step in ["-1,", "0,", "1,"] {
        assert!(rows.iter().filter(|r| r.starts_with(step)).count() >= 4, "step {step}");
    }
    assert!(rows.iter().all(|r| r.contains(",pass,")));
}
