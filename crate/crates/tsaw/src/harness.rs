//! Experiment runner: named statistical experiments over the walk, the gap
//! lines, the profile recursion, and the continuum objects, each reduced to
//! a set of pass/fail checks collected in a serializable report.
//!
//! An experiment is a pure function of its [`config::ExperimentConfig`] and
//! a master seed: replica randomness is derived from `(seed, replica, tag)`
//! counters, results are merged in replica order, and reports serialize to
//! the same bytes no matter how many threads ran the replicas.  The
//! [`acceptance`] module bundles the experiments into the release battery.

pub mod acceptance;
pub mod config;
pub mod experiments;
pub mod report;

use thiserror::Error;

/// Names accepted by [`experiments::run_experiment`].
pub const EXPERIMENTS: [&str; 8] = [
    "rk_vs_direct",
    "eta_stationarity",
    "eta_convergence",
    "hitting_tails",
    "profile_to_rbm",
    "t_scaling",
    "local_limit",
    "phi_scaling",
];

/// Failure modes of the experiment runner.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Experiment name not in [`EXPERIMENTS`].
    #[error("unknown experiment `{name}`")]
    UnknownExperiment {
        /// The rejected name.
        name: String,
    },
    /// Configuration value out of range for the requested experiment.
    #[error("invalid config: {0}")]
    Config(String),
    /// Invalid weight-model parameters.
    #[error(transparent)]
    Weights(#[from] crate::weights::WeightError),
    /// Walk simulation gave up.
    #[error(transparent)]
    Walk(#[from] crate::walk::WalkError),
    /// Profile construction gave up.
    #[error(transparent)]
    RayKnight(#[from] crate::ray_knight::RayKnightError),
    /// Gap-line simulation rejected its inputs.
    #[error(transparent)]
    Eta(#[from] crate::eta::EtaError),
    /// Statistical routine rejected its inputs.
    #[error(transparent)]
    Stats(#[from] crate::stats::StatsError),
    /// Artifact or report I/O failed.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Report serialization failed.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Map `0..n` through `f` in parallel, preserving index order in the output.
pub(crate) fn par_map<T: Send>(n: usize, f: impl Fn(u64) -> T + Send + Sync) -> Vec<T> {
    use rayon::prelude::*;
    (0..n as u64).into_par_iter().map(f).collect()
}
