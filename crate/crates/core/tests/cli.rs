use std::process::{Command, Output};

use serde_json::Value;

fn catshield(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catshield"))
        .args(args)
        .env_remove("CATSHIELD_THREADS")
        .output()
        .expect("run catshield")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json record")
}

fn close(v: &Value, expected: f64, tol: f64) -> bool {
    (v.as_f64().expect("number") - expected).abs() <= tol
}

#[test]
fn feasible_region_query() {
    let rec = json(&catshield(&["feasible", "--v", "1"]));
    assert!(close(&rec["eta_min"], 2.0 / 3.0, 1e-15));
    assert!(close(&rec["eta_max"], 1.0, 0.0));
}

#[test]
fn effective_channel_query() {
    let rec = json(&catshield(&["effective", "--eta", "0.9", "--eta2", "0.8", "--v", "0.5", "--v2", "0.5"]));
    assert!(close(&rec["eta_e"], 0.72, 1e-15));
    assert!(close(&rec["v_e"], 0.5, 0.0));
}

#[test]
fn central_value_at_half_loss() {
    let rec = json(&catshield(&["cn", "--eta", "0.5", "--v", "0.5", "--x0", "3"]));
    assert!(close(&rec["cn"], 0.0, 1e-12));
    assert_eq!(rec["negativity_possible"], false);
}

#[test]
fn rates_in_db_or_nats() {
    let db = json(&catshield(&["cn", "--eta", "0.8", "--v", "1", "--gamma-db", "8.6859"]));
    let nats = json(&catshield(&["cn", "--eta", "0.8", "--v", "1", "--gamma-db", "1", "--nats"]));
    assert!(close(&db["cn"], nats["cn"].as_f64().unwrap(), 1e-6));
}

#[test]
fn wigner_with_oracle() {
    let rec = json(&catshield(&["wigner", "--eta", "0.8", "--x", "0.4", "--p", "-0.3", "--oracle-check"]));
    assert!(rec["oracle_abs_err"].as_f64().unwrap() < 1e-9);
}

#[test]
fn hs_breakdown() {
    let rec = json(&catshield(&["hs", "--x0", "3", "--optimize"]));
    assert!(close(&rec["distance"], 2.0, 1e-9));
    let rec = json(&catshield(&["hs", "--eta", "0.7", "--optimize"]));
    assert!(rec["hs_optimal"].as_f64().unwrap() >= rec["distance"].as_f64().unwrap());
}

#[test]
fn condition_query() {
    let rec = json(&catshield(&["condition", "--eta", "0.9", "--v", "1", "--gamma-t-db", "3"]));
    assert_eq!(rec["negativity_possible"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(catshield(&["nonsense"]).status.code(), Some(2));
    assert_eq!(catshield(&["feasible"]).status.code(), Some(2));
    assert_eq!(catshield(&["cn", "--eta", "1.5"]).status.code(), Some(2));
    assert_eq!(catshield(&["sweep", "--eta-from", "0.9", "--eta-to", "0.9", "--eta-steps", "3"]).status.code(), Some(2));
    assert_eq!(catshield(&["--help"]).status.code(), Some(0));
}

#[test]
fn infeasible_sweep_exits_three() {
    let out = catshield(&["sweep", "--v", "1", "--eta-from", "0.3", "--eta-to", "0.6", "--eta-steps", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().skip(1).all(|l| l.contains(",false,")));
}

#[test]
fn optimizing_an_infeasible_point_exits_three() {
    assert_eq!(catshield(&["cn", "--eta", "0.5", "--v", "1", "--optimize"]).status.code(), Some(3));
}

#[test]
fn sweep_to_file_with_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = catshield(&[
        "sweep", "--scenario", "fig2", "--eta-from", "0.7", "--eta-to", "0.9", "--eta-steps", "3",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("15 rows, 15 feasible"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("eta,v,gamma_t_db,feasible,cn_unprotected,cn_optimal,gamma_opt_nats,gamma_opt_db\n"));
    assert_eq!(csv.lines().count(), 16);
}

#[test]
fn sweep_json_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    std::fs::write(
        &cfg,
        r#"{
  "scenario": "custom",
  "state": {"x0": 3.0, "parity": "odd"},
  "eta_grid": [0.8, 0.9],
  "series": [{"v": 0.5, "gamma_t": 0.0}],
  "objective": "hs",
  "format": "json"
}"#,
    )
    .unwrap();
    let out = catshield(&["sweep", "--config", cfg.to_str().unwrap()]);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["hs_optimal"].as_f64().unwrap() >= rows[0]["hs_unprotected"].as_f64().unwrap());
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["sweep", "--scenario", "fig4", "--eta-from", "0.9", "--eta-to", "1", "--eta-steps", "3"];
    let one = Command::new(env!("CARGO_BIN_EXE_catshield"))
        .args(args)
        .env("CATSHIELD_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_catshield"))
        .args(args)
        .env("CATSHIELD_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_catshield"))
        .args(args)
        .env("CATSHIELD_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
