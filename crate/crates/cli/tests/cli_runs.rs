//! End-to-end runs of the `quatflag` binary: exit codes, JSON shape,
//! determinism, and the output-file path.

use std::process::{Command, Output};

use serde_json::Value;

fn quatflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatflag"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("binary exits normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_theorem_reports_ranks_and_passes() {
    let out = quatflag(&["verify-theorem", "--n", "2", "--max-degree", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["allPassed"], Value::Bool(true));
    assert_eq!(v["convention"], "left");
    let ranks: Vec<u64> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["artinRank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [1, 3, 5, 7]);
    for d in v["degrees"].as_array().unwrap() {
        assert_eq!(d["injective"], Value::Bool(true));
        assert_eq!(d["surjective"], Value::Bool(true));
        for factor in d["invariantFactors"].as_array().unwrap() {
            assert_eq!(factor, "1");
        }
    }
}

#[test]
fn the_position_pair_convention_fails_loudly() {
    let out = quatflag(&[
        "verify-theorem",
        "--n",
        "3",
        "--max-degree",
        "1",
        "--convention",
        "right",
    ]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("divisibility"), "stderr: {err}");
}

#[test]
fn morse_report_census_matches_the_q_factorial() {
    let out = quatflag(&["morse-report", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["indexCensus"], serde_json::json!([1, 2, 2, 1]));
    assert_eq!(v["expectedCensus"], serde_json::json!([1, 2, 2, 1]));
    assert_eq!(v["uniqueMinimum"], Value::Bool(true));
    assert_eq!(v["uniqueMaximum"], Value::Bool(true));
    assert_eq!(v["allPassed"], Value::Bool(true));
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn invalid_parameters_exit_with_the_config_code() {
    // a does not sum to zero
    let out = quatflag(&["morse-report", "--n", "2", "--a", "1,2"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());

    // unsupported degree scale
    let out = quatflag(&["verify-theorem", "--n", "2", "--scale", "3"]);
    assert_eq!(code(&out), 2);

    // budget too small for the constraint matrix
    let out = quatflag(&[
        "verify-theorem",
        "--n",
        "3",
        "--max-degree",
        "2",
        "--budget-cells",
        "10",
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget"), "stderr: {err}");
}

#[test]
fn geomlab_is_deterministic_per_seed() {
    let args = ["geomlab", "--n", "2", "--seed", "7"];
    let first = quatflag(&args);
    let second = quatflag(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let v = json(&first);
    assert_eq!(v["seed"].as_u64(), Some(7));
    assert_eq!(v["n"].as_u64(), Some(2));
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 10);
    for check in checks {
        assert_eq!(check["pass"], Value::Bool(true), "check: {check}");
    }
}

#[test]
fn markdown_format_renders_tables() {
    let out = quatflag(&["morse-report", "--n", "2", "--format", "md"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| w | height |"), "markdown: {text}");
    assert!(text.contains("verdict: pass"), "markdown: {text}");
}

#[test]
fn report_lands_in_the_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = quatflag(&[
        "verify-theorem",
        "--n",
        "2",
        "--max-degree",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["allPassed"], Value::Bool(true));
}
