//! End-to-end tests of the binary: output shapes, exit codes, round trips
//! and run-to-run determinism.

use quiver_dt::doc::{entries_from_records, DtRecord};
use quiver_dt::dtpipe::DtProblem;
use quiver_dt::quiver::Quiver;
use quiver_dt::stability::CentralCharge;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quiverdt"))
}

fn write_doc(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("quiverdt-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const ONE_LOOP: &str = r#"{
    "vertices": ["1"],
    "arrows": [{"id": "x", "from": "1", "to": "1"}],
    "theta": [0],
    "truncation": 3
}"#;

const THREE_LOOP: &str = r#"{
    "vertices": ["1"],
    "arrows": [
        {"id": "x", "from": "1", "to": "1"},
        {"id": "y", "from": "1", "to": "1"},
        {"id": "z", "from": "1", "to": "1"}
    ],
    "potential": [
        {"coeff": 1, "cycle": ["x", "y", "z"]},
        {"coeff": -1, "cycle": ["y", "x", "z"]}
    ],
    "cut": ["z"],
    "provider": "feit-fine",
    "theta": [0],
    "truncation": 4
}"#;

#[test]
fn dt_of_the_one_loop_quiver() {
    let path = write_doc("one-loop.json", ONE_LOOP);
    let out = bin().args(["dt", "--input"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("d=[1]\tdt=v"), "got: {}", text);
    // exactly one table row
    assert_eq!(text.lines().filter(|l| l.starts_with("d=")).count(), 1);
}

#[test]
fn dt_json_round_trips() {
    let path = write_doc("one-loop-rt.json", ONE_LOOP);
    let out = bin()
        .args(["dt", "--format", "json", "--euler", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["command"], "dt");
    assert_eq!(value["generic"], true);
    assert_eq!(value["convention"], "commutative-Sym");
    let records: Vec<DtRecord> = serde_json::from_value(value["entries"].clone()).unwrap();
    let reparsed = entries_from_records(&records);
    let expected = DtProblem::plain(Quiver::loop_quiver(1))
        .dt_invariants(&CentralCharge::from_theta_ints(&[0]), 3)
        .unwrap();
    assert_eq!(reparsed, expected.entries);
    assert_eq!(records[0].euler.as_deref(), Some("-1"));
}

#[test]
fn identical_documents_produce_identical_bytes() {
    let path = write_doc("three-loop-det.json", THREE_LOOP);
    let run = || {
        bin()
            .args(["dt", "--format", "json", "--euler", "--input"])
            .arg(&path)
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // independent of the worker count
    let c = bin()
        .args([
            "dt", "--format", "json", "--euler", "--jobs", "2", "--input",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn truncation_flag_overrides_document() {
    let path = write_doc("three-loop-n2.json", THREE_LOOP);
    let out = bin()
        .args(["dt", "--truncation", "2", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("d=")).count(), 2);
    assert!(text.contains("dt=v^3"));
}

#[test]
fn series_output_is_sorted_and_exact() {
    let path = write_doc(
        "a2.json",
        r#"{
            "vertices": ["1", "2"],
            "arrows": [{"id": "a", "from": "1", "to": "2"}],
            "truncation": 2
        }"#,
    );
    let out = bin()
        .args(["series", "--format", "json", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let entries = value["entries"].as_array().unwrap();
    assert_eq!(entries[0]["d"], serde_json::json!([0, 0]));
    assert_eq!(entries[0]["coeff"], "1");
    let coeff_11 = entries
        .iter()
        .find(|e| e["d"] == serde_json::json!([1, 1]))
        .unwrap();
    assert_eq!(coeff_11["coeff"], "(v^3)/(v^4 - 2*v^2 + 1)");
}

#[test]
fn oracle_counts_commuting_pairs() {
    let path = write_doc("three-loop-oracle.json", THREE_LOOP);
    let out = bin()
        .args(["oracle", "--dim", "2", "--prime", "2", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "count=88");
    let out = bin()
        .args([
            "oracle", "--format", "json", "--dim", "1", "--prime", "3", "--input",
        ])
        .arg(&path)
        .output()
        .unwrap();
    let value: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    // commuting 1x1 pairs fill the whole plane
    assert_eq!(value["count"], 9);
}

#[test]
fn checks_pass_and_report() {
    let out = bin()
        .args(["check", "dilog", "--truncation", "6"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "PASS dilog N=6");
    let out = bin()
        .args(["check", "functional", "--truncation", "5", "--m", "-1,0,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).lines().count(), 3);
    let out = bin()
        .args(["check", "bseries", "--truncation", "4", "--m", "0,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn exit_codes() {
    // malformed document: 2
    let path = write_doc("bad.json", r#"{"vertices": ["1"], "bogus": true}"#);
    let out = bin().args(["dt", "--input"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8(out.stderr).unwrap().is_empty());
    // semantic validation: unknown vertex, still 2
    let path = write_doc(
        "bad-arrow.json",
        r#"{"vertices": ["1"], "arrows": [{"id": "a", "from": "1", "to": "2"}]}"#,
    );
    let out = bin().args(["dt", "--input"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // missing truncation: 2
    let path = write_doc("no-n.json", r#"{"vertices": ["1"]}"#);
    let out = bin()
        .args(["series", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // computation error: oracle cap exceeded is 1
    let path = write_doc("big.json", THREE_LOOP);
    let out = bin()
        .args(["oracle", "--dim", "40", "--prime", "5", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // missing file: 2
    let out = bin()
        .args(["dt", "--input", "/nonexistent/x.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn closed_stdout_pipe_is_not_an_error() {
    use std::process::Stdio;
    let path = write_doc("one-loop-pipe.json", ONE_LOOP);
    // drop the read end before the child produces anything: every write
    // sees EPIPE, which must end the run quietly
    let mut child = bin()
        .args(["series", "--input"])
        .arg(&path)
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    assert!(status.success(), "status: {:?}", status);
    let mut err = String::new();
    use std::io::Read;
    child
        .stderr
        .take()
        .unwrap()
        .read_to_string(&mut err)
        .unwrap();
    assert!(err.is_empty(), "stderr: {}", err);
}

#[test]
fn user_table_provider_through_the_cli() {
    // classes of the full representation space of the 1-loop quiver
    let path = write_doc(
        "user-table.json",
        r#"{
            "vertices": ["1"],
            "arrows": [{"id": "x", "from": "1", "to": "1"}],
            "provider": "user-table",
            "classes": [
                {"d": [1], "class": "L"},
                {"d": [2], "class": "L^4"},
                {"d": [3], "class": "L^9"}
            ],
            "truncation": 3
        }"#,
    );
    let out = bin()
        .args(["dt", "--format", "json", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let records: Vec<DtRecord> = serde_json::from_value(value["entries"].clone()).unwrap();
    // matches DT of the plain 1-loop quiver
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].d, vec![1]);
    assert_eq!(records[0].dt.to_string(), "v");
    // a missing class is a computation error
    let out = bin()
        .args(["dt", "--truncation", "4", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
