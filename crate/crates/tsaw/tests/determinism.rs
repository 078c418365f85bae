//! Reruns with the same seed must reproduce reports byte for byte,
//! independent of thread count; keyed estimators must reproduce exactly.

use tsaw::continuum::estimate_phi_hat;
use tsaw::harness::config::ExperimentConfig;
use tsaw::harness::experiments::run_experiment;
use tsaw::rng::{self, tag};

fn small_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::preset("eta_stationarity").expect("known experiment");
    cfg.n = 400;
    cfg.t = 30.0;
    cfg
}

#[test]
fn reports_are_byte_identical_across_reruns() {
    let cfg = small_config();
    let a = run_experiment(&cfg, 5, None).expect("runs").to_json().expect("serializes");
    let b = run_experiment(&cfg, 5, None).expect("runs").to_json().expect("serializes");
    assert_eq!(a, b);
}

#[test]
fn reports_are_identical_under_a_single_thread_pool() {
    let cfg = small_config();
    let wide = run_experiment(&cfg, 6, None).expect("runs").to_json().expect("serializes");
    let narrow = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(|| run_experiment(&cfg, 6, None).expect("runs").to_json().expect("serializes"));
    assert_eq!(wide, narrow);
}

#[test]
fn distinct_seeds_give_distinct_reports() {
    let cfg = small_config();
    let a = run_experiment(&cfg, 5, None).expect("runs").to_json().expect("serializes");
    let b = run_experiment(&cfg, 7, None).expect("runs").to_json().expect("serializes");
    assert_ne!(a, b);
}

#[test]
fn keyed_phi_hat_estimates_reproduce_exactly() {
    let run = || estimate_phi_hat(&[1.0], 0.0, 60, 0.05, |key| rng::stream(90, key, tag::RBM));
    let (a, b) = (run(), run());
    assert_eq!(a.len(), 1);
    assert_eq!(a[0].estimate.to_bits(), b[0].estimate.to_bits());
    assert_eq!(a[0].stderr.to_bits(), b[0].stderr.to_bits());
    assert_eq!(a[0].h_max.to_bits(), b[0].h_max.to_bits());
}
