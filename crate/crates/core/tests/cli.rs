use std::path::PathBuf;
use std::process::{Command, Output};

use relaygap::cutbounds::BoundReport;
use relaygap::experiments::{load_report, ExperimentReport};
use relaygap::reduction::LinearDeterministicNetwork;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn relaygap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relaygap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn reduce_ld_prints_levels_of_two_transmitter_example() {
    let out = relaygap(&["reduce", data("two_transmitter.json").to_str().unwrap(), "--model", "ld"]);
    assert!(out.status.success());
    let ld: LinearDeterministicNetwork = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(ld.q, 2);
    assert_eq!(ld.edges.iter().map(|e| e.levels).collect::<Vec<_>>(), vec![2, 2, 1, 1]);
}

#[test]
fn reduce_ds_csv_has_header_and_one_row_per_edge() {
    let out = relaygap(&[
        "reduce",
        data("line_complex.json").to_str().unwrap(),
        "--model",
        "ds",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("from,to,qgain_re,qgain_im,n"));
    assert!(lines.count() >= 1);
}

#[test]
fn bound_writes_json_report_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.json");
    let out = relaygap(&[
        "bound",
        data("two_transmitter.json").to_str().unwrap(),
        "--model",
        "ld",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: BoundReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.bound_bits, 2.0);
    assert_eq!(report.per_cut.len(), 4);
}

#[test]
fn bound_csv_lists_every_cut() {
    let out = relaygap(&[
        "bound",
        data("diamond_h8.json").to_str().unwrap(),
        "--model",
        "gaussian",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("cut_bitmask,model,value_bits"));
    assert_eq!(text.lines().count(), 1 + 16);
}

#[test]
fn counterexample_experiment_round_trips_through_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cx.json");
    let out = relaygap(&[
        "exp",
        "counterexample",
        "--k-min",
        "1",
        "--k-max",
        "6",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: ExperimentReport = load_report(&json).unwrap();
    assert_eq!(report.points.len(), 6);
    assert!(report.all_passed());

    let out = relaygap(&["exp", "counterexample", "--k-min", "1", "--k-max", "6", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.contains("network_gap_ld"), "{header}");
    assert_eq!(text.lines().count(), 1 + 6);
}

#[test]
fn mimo_experiment_reports_brackets() {
    let out = relaygap(&["exp", "mimo", "--matrix", data("mimo_h16.json").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = ExperimentReport::from_json(&stdout(&out)).unwrap();
    assert!(report.checks.iter().any(|c| c.asserted && c.passed));
}

#[test]
fn verify_theorem_on_small_matrix_holds() {
    let out = relaygap(&[
        "verify-theorem",
        "--matrix",
        data("counterexample_h4.json").to_str().unwrap(),
        "--n",
        "2",
        "--format",
        "csv",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("step,mi_before_bits"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")), "{text}");
}

#[test]
fn verify_theorem_rejects_too_few_samples() {
    let out = relaygap(&[
        "verify-theorem",
        "--matrix",
        data("counterexample_h4.json").to_str().unwrap(),
        "--n",
        "2",
        "--samples",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_input_file_exits_with_code_2() {
    let out = relaygap(&["bound", "/nonexistent/net.json", "--model", "ld"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn malformed_network_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"nodes": 3, "edges": [{"from": 0, "to": 0, "re": 1, "im": 0}]}"#).unwrap();
    let out = relaygap(&["bound", path.to_str().unwrap(), "--model", "gaussian"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = relaygap(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
