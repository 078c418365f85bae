//! Config files and emitted artifacts: JSON round trips, unknown fields and
//! experiments are rejected, and report directories have the documented shape.

use tsaw::harness::config::ExperimentConfig;
use tsaw::harness::experiments::run_experiment;
use tsaw::harness::{HarnessError, EXPERIMENTS};

#[test]
fn every_preset_round_trips_through_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    for name in EXPERIMENTS {
        let cfg = ExperimentConfig::preset(name).expect("known experiment");
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&cfg).expect("serializes"))
            .expect("writes");
        let loaded = ExperimentConfig::load(&path).expect("loads");
        assert_eq!(loaded, cfg, "{name} drifted through the file");
    }
}

#[test]
fn unknown_experiment_and_unknown_field_are_rejected() {
    let err = ExperimentConfig::preset("tea_leaves").unwrap_err();
    assert!(matches!(err, HarnessError::UnknownExperiment { .. }));

    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"experiment":"eta_stationarity","entropy":11}"#).expect("writes");
    assert!(ExperimentConfig::load(&path).is_err());
}

#[test]
fn partial_file_fills_defaults() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("partial.json");
    std::fs::write(&path, r#"{"experiment":"hitting_tails","n":123}"#).expect("writes");
    let cfg = ExperimentConfig::load(&path).expect("loads");
    assert_eq!(cfg.n, 123);
    assert_eq!(cfg.t_cap, ExperimentConfig::default().t_cap);
}

#[test]
fn report_directory_has_documented_files() {
    let mut cfg = ExperimentConfig::preset("eta_stationarity").expect("known experiment");
    cfg.n = 400;
    cfg.t = 20.0;
    let dir = tempfile::tempdir().expect("tempdir");
    let report = run_experiment(&cfg, 41, Some(dir.path())).expect("runs");

    let json = std::fs::read_to_string(dir.path().join("report.json")).expect("report.json");
    assert_eq!(json, report.to_json().expect("serializes"));

    let csv = std::fs::read_to_string(dir.path().join("checks.csv")).expect("checks.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,statistic,threshold,p_value,n,passed"));
    assert_eq!(lines.count(), report.checks.len());

    assert!(dir.path().join("eta_values.csv").exists());
}
