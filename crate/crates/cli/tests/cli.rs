use std::io::Write;
use std::process::{Command, Output, Stdio};

use ruelle_cli::{parse_document, CliError, ProblemDocument};
use serde_json::Value;

const GOLDEN: &str = r#"{
  "alphabet_size": 2,
  "transition": [[1, 1], [1, 0]],
  "theta": 0.5,
  "potential": {"memory": 1, "values": [{"word": [1], "value": 0.0}, {"word": [2], "value": 0.0}]}
}"#;

const FULL_SHIFT: &str = r#"{
  "alphabet_size": 2,
  "transition": [[1, 1], [1, 1]],
  "theta": 0.5,
  "potential": {"memory": 1, "values": [{"word": [1], "value": 0.0}, {"word": [2], "value": 0.0}]},
  "observables": [
    {"name": "first", "memory": 1, "values": [{"word": [1], "value": 1.0}, {"word": [2], "value": 0.0}]},
    {"name": "pair", "memory": 2, "values": [
      {"word": [1, 1], "value": 0.5}, {"word": [1, 2], "value": -1.0},
      {"word": [2, 1], "value": 2.0}, {"word": [2, 2], "value": 0.25}
    ]}
  ]
}"#;

const MARKOV: &str = r#"{
  "alphabet_size": 3,
  "transition": [[1, 1, 0], [0, 1, 1], [1, 1, 1]],
  "theta": 0.8,
  "potential": {"memory": 2, "values": [
    {"word": [1, 1], "value": 0.3}, {"word": [1, 2], "value": -1.2},
    {"word": [2, 2], "value": 1.7}, {"word": [2, 3], "value": 0.0},
    {"word": [3, 1], "value": -0.4}, {"word": [3, 2], "value": 0.9}, {"word": [3, 3], "value": -2.0}
  ]},
  "observables": [
    {"name": "x0", "memory": 1, "values": [{"word": [1], "value": 1.0}, {"word": [2], "value": 2.0}, {"word": [3], "value": 3.0}]}
  ]
}"#;

fn ruelle(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ruelle"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn perron_on_golden_mean() {
    let out = ruelle(&["perron"], GOLDEN);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let lambda = report["perron"]["lambda"].as_f64().unwrap();
    assert!((lambda - 1.618_033_988_7).abs() < 1e-10);
    assert_eq!(report["spectrum"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_full_shift_passes() {
    let out = ruelle(&["verify"], FULL_SHIFT);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() > 100);
    for row in checks {
        assert!(row["pass"].as_bool().unwrap());
        assert!(row["margin"].as_f64().unwrap() >= 0.0, "{row}");
    }
    assert_eq!(report["status"], "pass");
}

#[test]
fn verify_markov_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("markov.json");
    std::fs::write(&path, MARKOV).unwrap();
    let out = ruelle(&["verify", "--steps", "30", "--input", path.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let conv = &report["convergence"][0];
    assert!(conv["empirical_rate"].as_f64().unwrap() < conv["rho"].as_f64().unwrap());
}

#[test]
fn missing_word_is_an_input_error() {
    let doc = r#"{
      "alphabet_size": 2, "transition": [[1, 1], [1, 1]], "theta": 0.5,
      "potential": {"memory": 2, "values": [
        {"word": [1, 1], "value": 0.0}, {"word": [1, 2], "value": 0.0}, {"word": [2, 2], "value": 0.0}
      ]}
    }"#;
    let out = ruelle(&["perron"], doc);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("InputParse") && err.contains("missing word [2, 1]"), "{err}");
}

#[test]
fn malformed_json_reports_position() {
    let out = ruelle(&["perron"], "{\"alphabet_size\": 2,\n \"transition\": [[1, 1], [1, 1]],\n \"theta\": }");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(ruelle(&["bogus"], GOLDEN).status.code(), Some(1));
    assert_eq!(ruelle(&["correlate", "--u", "nope", "--v", "first"], FULL_SHIFT).status.code(), Some(1));
    assert_eq!(ruelle(&["perron", "--level", "0"], GOLDEN).status.code(), Some(1));
    assert_eq!(ruelle(&["--help"], "").status.code(), Some(0));
}

#[test]
fn report_echo_round_trips() {
    for doc in [GOLDEN, FULL_SHIFT, MARKOV] {
        let report = json(&ruelle(&["certificate"], doc));
        let echoed: ProblemDocument = serde_json::from_value(report["input"].clone()).unwrap();
        assert_eq!(echoed, parse_document(doc).unwrap());
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["sample", "--length", "5000", "--seed", "11"],
        vec!["verify", "--steps", "10"],
        vec!["correlate", "--u", "x0", "--v", "x0", "--steps", "8"],
    ] {
        let a = ruelle(&args, MARKOV);
        let b = ruelle(&args, MARKOV);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn sampling_tracks_exact_averages() {
    let report = json(&ruelle(&["sample", "--length", "100000", "--seed", "3"], MARKOV));
    for avg in report["sampling"]["averages"].as_array().unwrap() {
        let (e, x) = (avg["empirical"].as_f64().unwrap(), avg["exact"].as_f64().unwrap());
        assert!((e - x).abs() < 0.05, "{avg}");
    }
}

#[test]
fn correlations_of_independent_coordinates_vanish() {
    let report = json(&ruelle(&["correlate", "--u", "first", "--v", "pair", "--steps", "5"], FULL_SHIFT));
    let rows = report["correlations"].as_array().unwrap();
    for row in &rows[1..] {
        assert!(row["correlation"].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn pressure_and_text_format() {
    let report = json(&ruelle(&["pressure"], FULL_SHIFT));
    assert!((report["pressure"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    let out = ruelle(&["invariance", "--depth", "5", "--format", "text"], MARKOV);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("checks: 1/1 pass") && text.contains("status: pass"), "{text}");
}

#[test]
fn violated_bound_maps_to_exit_two() {
    let row = ruelle::CheckRow::upper("lambda_upper", None, 1.0, 2.0);
    let report = ruelle::CheckReport { rows: vec![row] };
    let err = report.finish().unwrap_err();
    assert_eq!(CliError::from(err).exit_code(), 2);
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
}
