//! End-to-end checks of the `wallsun` binary: output schemas, format
//! parity, exit codes, and the scan interfaces.

use std::path::Path;
use std::process::{Command, Output};

fn wallsun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallsun"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = wallsun(args);
    assert!(out.status.success(), "wallsun {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn fwtest_emits_the_documented_row() {
    assert_eq!(stdout_of(&["fwtest", "17"]), "17,-1,-1,9,16,0,1\n");
    assert_eq!(stdout_of(&["fwtest", "7"]), "7,-1,3,2,3,0,1\n");
}

#[test]
fn fwtest_formats_carry_identical_content() {
    let csv = stdout_of(&["fwtest", "13", "--format", "csv"]);
    let json: serde_json::Value =
        serde_json::from_str(&stdout_of(&["fwtest", "13", "--format", "json"])).unwrap();
    let fields: Vec<&str> = csv.trim().split(',').collect();
    assert_eq!(json["p"].as_u64().unwrap().to_string(), fields[0]);
    assert_eq!(json["epsilon"].as_i64().unwrap().to_string(), fields[1]);
    assert_eq!(json["k"].as_i64().unwrap().to_string(), fields[2]);
    assert_eq!(json["a"].as_u64().unwrap().to_string(), fields[3]);
    assert_eq!(json["b"].as_u64().unwrap().to_string(), fields[4]);
    assert_eq!(json["is_fw"].as_bool().unwrap() as u8, fields[5].parse::<u8>().unwrap());
    assert_eq!(json["is_near_miss"].as_bool().unwrap() as u8, fields[6].parse::<u8>().unwrap());
}

#[test]
fn pisano_text_and_json() {
    let text = stdout_of(&["pisano", "12"]);
    assert!(text.contains("π(12) = 24"), "{text}");
    assert!(text.contains("l(12) = 12"));

    let json: serde_json::Value =
        serde_json::from_str(&stdout_of(&["pisano", "12", "--format", "json"])).unwrap();
    assert_eq!(json["m"], 12);
    assert_eq!(json["pi"], 24);
    assert_eq!(json["rank"], 12);
    assert_eq!(json["factors"].as_array().unwrap().len(), 2);

    assert_eq!(stdout_of(&["pisano", "12", "--format", "csv"]), "12,24,12\n");
    assert_eq!(stdout_of(&["rank", "9", "--format", "csv"]), "9,12\n");
}

#[test]
fn scan_summary_schema() {
    let out = wallsun(&["scan", "--from", "7", "--to", "2000"]);
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(summary["range"], serde_json::json!([7, 2000]));
    assert_eq!(summary["threshold"], 100);
    assert_eq!(summary["primes_tested"], 300);
    assert_eq!(summary["fw_found"], 0);
    assert_eq!(summary["min_abs_k"], 1);
    assert!(summary["near_misses"].as_u64().unwrap() > 0);
    assert!(summary["elapsed_seconds"].as_f64().unwrap() >= 0.0);

    // every stdout row is a well-formed record with |k| ≤ 100
    let stdout = String::from_utf8(out.stdout).unwrap();
    for line in stdout.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7, "bad row {line:?}");
        assert!(fields[2].parse::<i64>().unwrap().unsigned_abs() <= 100);
    }
}

#[test]
fn scan_threads_do_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("t1.csv");
    let four = dir.path().join("t4.csv");
    assert!(wallsun(&["scan", "--from", "7", "--to", "30000", "--threads", "1", "--out",
        one.to_str().unwrap()]).status.success());
    assert!(wallsun(&["scan", "--from", "7", "--to", "30000", "--threads", "4", "--out",
        four.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&one).unwrap(), std::fs::read(&four).unwrap());
}

#[test]
fn nearmiss_report_from_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let summary_path = dir.path().join("summary.json");
    assert!(wallsun(&["scan", "--from", "7", "--to", "5000", "--summary-out",
        summary_path.to_str().unwrap(), "--out", dir.path().join("rows.csv").to_str().unwrap()])
        .status
        .success());
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "nearmiss-report",
        "--summary",
        summary_path.to_str().unwrap(),
    ]))
    .unwrap();
    assert_eq!(report["range"], serde_json::json!([7, 5000]));
    assert!(report["expected"].as_f64().unwrap() > 0.0);
    assert!(report["poisson_sigma"].as_f64().unwrap() > 0.0);
    assert!(!report["anomalous"].as_bool().unwrap());
}

#[test]
fn abc_outputs() {
    let json: serde_json::Value =
        serde_json::from_str(&stdout_of(&["abc-triple", "10"])).unwrap();
    assert_eq!(json["f_n"], "55");
    assert_eq!(json["u_n"], "55");
    assert_eq!(json["v_n"], "1");
    assert_eq!(json["height_bound_ok"], true);
    assert_eq!(json["radical_bound_ok"], true);

    let table = stdout_of(&["abc-table", "--max-n", "12"]);
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,f_n,u_n,v_n,log_height,log_radical,quality,height_ok,radical_ok"
    );
    assert_eq!(lines.count(), 12);
    // quality(1) is exactly 1
    let first = table.lines().nth(1).unwrap();
    assert_eq!(first.split(',').nth(6).unwrap(), "1");
}

#[test]
fn heuristic_output() {
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "heuristic", "--model", "klaska", "--from", "7", "--to", "10000",
    ]))
    .unwrap();
    assert_eq!(json["model"], "Klaska");
    assert_eq!(json["approximate"], false);
    let klaska = json["expected"].as_f64().unwrap();
    let cdp: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "heuristic", "--model", "cdp", "--from", "7", "--to", "10000",
    ]))
    .unwrap();
    assert!(klaska < cdp["expected"].as_f64().unwrap());
}

#[test]
fn verify_suites_pass_at_small_bounds() {
    for suite in ["wall", "lemmas", "criteria", "norm", "abc"] {
        let out = wallsun(&["verify", "--suite", suite, "--bound", "1000"]);
        assert!(out.status.success(), "suite {suite}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).contains("OK"));
    }
}

#[test]
fn exit_codes() {
    // 2: invalid input
    assert_eq!(wallsun(&["fwtest", "21"]).status.code(), Some(2));
    assert_eq!(wallsun(&["fwtest", "5"]).status.code(), Some(2));
    assert_eq!(wallsun(&["pisano", "1"]).status.code(), Some(2));
    assert_eq!(wallsun(&["scan", "--from", "2", "--to", "100"]).status.code(), Some(2));
    // 2: unknown flags are errors (clap)
    assert_eq!(wallsun(&["scan", "--to", "100", "--bogus"]).status.code(), Some(2));
    // 2: heuristic range below 7
    assert_eq!(
        wallsun(&["heuristic", "--model", "cdp", "--from", "3", "--to", "100"]).status.code(),
        Some(2)
    );
    // 3: budget
    assert_eq!(wallsun(&["abc-triple", "200"]).status.code(), Some(3));
}

#[test]
fn corrupt_checkpoint_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("bad.ckpt");
    std::fs::write(&ckpt, "not a checkpoint\n").unwrap();
    let out = wallsun(&["scan", "--from", "7", "--to", "1000", "--checkpoint",
        ckpt.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn checkpoint_file_has_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("scan.ckpt");
    assert!(wallsun(&["scan", "--from", "7", "--to", "4000", "--checkpoint",
        ckpt.to_str().unwrap(), "--out", dir.path().join("r.csv").to_str().unwrap()])
        .status
        .success());
    let body = std::fs::read_to_string(&ckpt).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "completed_through=4000");
    assert!(lines.clone().count() > 0);
    for line in lines {
        assert_eq!(line.split(',').count(), 7);
    }
    assert!(!Path::new(&ckpt.with_extension("tmp")).exists(), "temp file left behind");
}

#[test]
fn seed_changes_nothing_but_sampling() {
    let a = stdout_of(&["scan", "--from", "7", "--to", "20000", "--seed", "1"]);
    let b = stdout_of(&["scan", "--from", "7", "--to", "20000", "--seed", "42"]);
    assert_eq!(a, b, "emitted records must not depend on the sampling seed");
}
