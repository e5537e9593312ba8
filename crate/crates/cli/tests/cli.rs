//! End-to-end tests of the `seqent` binary: command surface, exit codes,
//! and output determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn seqent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_fixture(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn simulated_log(dir: &Path, span: &str) -> String {
    let path = dir.join("sim.csv");
    let output = seqent(&[
        "simulate",
        "--egos",
        "2",
        "--states",
        "3",
        "--stay",
        "0.8",
        "--span",
        span,
        "--seed",
        "5",
        "--out-file",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "simulate failed: {output:?}");
    path.to_string_lossy().into_owned()
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulated_log(dir.path(), "100000");
    let b_path = dir.path().join("sim2.csv");
    let output = seqent(&[
        "simulate",
        "--egos",
        "2",
        "--states",
        "3",
        "--stay",
        "0.8",
        "--span",
        "100000",
        "--seed",
        "5",
        "--out-file",
        b_path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(fs::read(a).unwrap(), fs::read(b_path).unwrap());
}

#[test]
fn analyze_json_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let log = simulated_log(dir.path(), "10000000");

    let first = seqent(&["analyze", &log, "--min-length", "10"]);
    assert!(first.status.success(), "{first:?}");
    let second = seqent(&["analyze", &log, "--min-length", "10"]);
    assert_eq!(first.stdout, second.stdout);

    let json: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert!(json["config"]["bin_width"].is_u64());
    let individuals = json["individuals"].as_array().unwrap();
    assert_eq!(individuals.len(), 2);
    for ind in individuals {
        assert!(ind["partner"]["h_lz"].is_f64());
        assert!(ind["partner"]["h_iid"].is_f64());
        assert!(ind["partner"]["h_unif"].is_f64());
        assert!(ind["partner"]["effective_choices"].is_f64());
    }
    assert!(json["summary"]["partner.h_lz"]["mean"].is_f64());
    assert!(json["histograms"]["partner.h_lz"].is_array());
}

#[test]
fn analyze_csv_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let log = simulated_log(dir.path(), "3000000");
    let out_dir = dir.path().join("report");
    let output = seqent(&[
        "analyze",
        &log,
        "--min-length",
        "10",
        "--format",
        "csv",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let individuals = fs::read_to_string(out_dir.join("individuals.csv")).unwrap();
    assert!(individuals.starts_with("ego,partner_n,partner_k,partner_h_lz"));
    assert_eq!(individuals.lines().count(), 3);
    for name in ["excluded.csv", "summary.csv", "histograms.csv"] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }
}

#[test]
fn analyze_all_filtered_uses_distinct_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let log = write_fixture(
        dir.path(),
        "tiny.csv",
        "time,ego,alter,location\n0,A,B,\n300,A,C,\n",
    );
    let output = seqent(&["analyze", &log]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // The report body is still emitted, with the exclusion listed.
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["individuals"].as_array().unwrap().len(), 0);
    assert_eq!(json["excluded"][0]["ego"], "A");
}

#[test]
fn analyze_malformed_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let log = write_fixture(dir.path(), "bad.csv", "time,ego,alter,location\nx,A,A,L1\n");
    let output = seqent(&["analyze", &log]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn analyze_missing_file_fails() {
    let output = seqent(&["analyze", "/nonexistent/events.csv"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn predict_on_deterministic_log_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_fixture(dir.path(), "swap.csv", "0,1\n1,0\n");
    let log_path = dir.path().join("periodic.csv");
    let sim = seqent(&[
        "simulate",
        "--matrix",
        &matrix,
        "--egos",
        "1",
        "--span",
        "1814400",
        "--out-file",
        log_path.to_str().unwrap(),
    ]);
    assert!(sim.status.success(), "{sim:?}");

    let output = seqent(&["predict", log_path.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["overall"]["top1"], 1.0);
    assert_eq!(json["overall"]["top5"], 1.0);
    assert_eq!(json["counting"], "per_event");
}

#[test]
fn predict_empty_log_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let log = write_fixture(dir.path(), "empty.csv", "time,ego,alter,location\n");
    let output = seqent(&["predict", &log]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["individuals"].as_array().unwrap().len(), 0);
}

#[test]
fn predict_csv_and_model_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let log = simulated_log(dir.path(), "3000000");
    let models = dir.path().join("models");
    let output = seqent(&[
        "predict",
        &log,
        "--format",
        "csv",
        "--dump-models",
        models.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let table = stdout(&output);
    assert!(table.starts_with("ego,windows,evaluated,hits_top1,hits_top5,acc_top1,acc_top5"));
    let dump = fs::read_to_string(models.join("model_ego000.csv")).unwrap();
    assert!(dump.starts_with("source,target,probability\n"));
    for line in dump.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3);
        let p: f64 = fields[2].parse().unwrap();
        assert!(p > 0.0 && p <= 1.0);
    }
}

#[test]
fn simulate_invalid_matrix_fails() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = write_fixture(dir.path(), "bad.csv", "0.9,0.2\n0.1,0.9\n");
    let output = seqent(&["simulate", "--matrix", &matrix]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn oracle_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write_fixture(dir.path(), "seq.txt", "a\na\nb\n");
    let output = seqent(&["oracle", &seq]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "i,lambda,lambda_naive,agreement\n1,1,1,ok\n2,2,2,ok\n3,1,1,ok\n"
    );
}

#[test]
fn oracle_empty_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write_fixture(dir.path(), "empty.txt", "");
    let output = seqent(&["oracle", &seq]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn simulate_pipes_into_analyze() {
    // The default simulate chain is stay-0.9 over 2 states; analyzing its
    // output should land near the chain's entropy rate.
    let dir = tempfile::tempdir().unwrap();
    let log_path = dir.path().join("chain.csv");
    let sim = seqent(&[
        "simulate",
        "--egos",
        "1",
        "--span",
        "30000000",
        "--seed",
        "7",
        "--out-file",
        log_path.to_str().unwrap(),
    ]);
    assert!(sim.status.success());
    let output = seqent(&["analyze", log_path.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let h_lz = json["individuals"][0]["partner"]["h_lz"].as_f64().unwrap();
    assert!((h_lz - 0.469).abs() <= 0.05, "h_lz {h_lz}");
}
