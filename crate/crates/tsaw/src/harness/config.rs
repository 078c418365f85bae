//! Experiment configuration: one flat parameter struct shared by all
//! experiments, JSON-loadable, with a tuned preset per experiment name.
//!
//! Unknown JSON keys are rejected so a typo cannot silently fall back to a
//! default; missing keys fill in from [`ExperimentConfig::default`].

use serde::{Deserialize, Serialize};

use super::{HarnessError, EXPERIMENTS};
use crate::weights::WeightModel;

/// Parameters of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name, one of [`EXPERIMENTS`].
    pub experiment: String,
    /// Jump-rate weight model.
    pub model: WeightModel,
    /// Site whose local time defines the stopping rule.
    pub j: i64,
    /// Stopping level of the local time at `j`.
    pub r: f64,
    /// Profile scales `A` to sweep.
    pub a_values: Vec<f64>,
    /// Laplace variable of the position-density estimator.
    pub s: f64,
    /// Rescaled anchor height.
    pub h: f64,
    /// Rescaled anchor position.
    pub x: f64,
    /// Replica count per route or ensemble.
    pub n: usize,
    /// Euler grid step of the reflected-walk simulations.
    pub dy: f64,
    /// Evolution time of the single-time gap-line experiments.
    pub t: f64,
    /// Evolution or exceedance time grid.
    pub t_grid: Vec<f64>,
    /// Snapshot times of the tail probe.
    pub tail_t_grid: Vec<f64>,
    /// Spatial grid: exceedance levels, or estimator evaluation points.
    pub x_grid: Vec<f64>,
    /// Censoring cap on stopping times and profile time sums.
    pub t_cap: f64,
    /// Per-direction site budget of profile builds.
    pub site_budget: usize,
    /// Per-replica event budget of walk simulations.
    pub event_budget: usize,
    /// Areas per quadrature node in the density estimator.
    pub n_per_node: usize,
    /// Replica count of reflected-walk reference ensembles.
    pub rbm_n: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: String::new(),
            model: WeightModel::Step { low: 1.0, high: 2.0 },
            j: 0,
            r: 2.0,
            a_values: vec![400.0],
            s: 1.0,
            h: 1.0,
            x: 0.0,
            n: 5000,
            dy: 1e-3,
            t: 200.0,
            t_grid: vec![5.0, 10.0, 20.0],
            tail_t_grid: vec![1.0, 5.0, 20.0],
            x_grid: Vec::new(),
            t_cap: 1e5,
            site_budget: 10_000,
            event_budget: 50_000_000,
            n_per_node: 2000,
            rbm_n: 10_000,
        }
    }
}

/// `count` evenly spaced values starting at `from`.
fn uniform_grid(from: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| from + step * i as f64).collect()
}

impl ExperimentConfig {
    /// The tuned configuration behind `name`, as used by the acceptance
    /// battery.
    pub fn preset(name: &str) -> Result<Self, HarnessError> {
        let base = ExperimentConfig { experiment: name.to_owned(), ..Self::default() };
        let cfg = match name {
            "rk_vs_direct" => ExperimentConfig { site_budget: 1_000_000, ..base },
            "eta_stationarity" => ExperimentConfig { n: 10_000, ..base },
            "eta_convergence" => ExperimentConfig {
                // Large batches keep the relaxation distances at t = 10 and
                // t = 20 separated above the histogram noise floor.
                n: 1_000_000,
                x_grid: uniform_grid(0.5, 0.25, 9),
                ..base
            },
            "hitting_tails" => ExperimentConfig {
                n: 10_000,
                t_grid: uniform_grid(0.5, 0.5, 12),
                t_cap: 50.0,
                ..base
            },
            "profile_to_rbm" => base,
            "t_scaling" => base,
            "local_limit" => ExperimentConfig {
                n: 100_000,
                a_values: vec![200.0],
                x_grid: uniform_grid(0.0, 0.25, 24),
                event_budget: 1_000_000,
                ..base
            },
            "phi_scaling" => ExperimentConfig { x: 0.5, ..base },
            other => {
                return Err(HarnessError::UnknownExperiment { name: other.to_owned() });
            }
        };
        Ok(cfg)
    }

    /// Parse a configuration from a JSON file.
    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Check every field against its domain.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(HarnessError::UnknownExperiment { name: self.experiment.clone() });
        }
        self.model.validate()?;
        let positives = [
            ("r", self.r),
            ("s", self.s),
            ("t", self.t),
            ("t_cap", self.t_cap),
        ];
        for (name, value) in positives {
            if !value.is_finite() || value <= 0.0 {
                return Err(HarnessError::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if !self.h.is_finite() || self.h < 0.0 {
            return Err(HarnessError::Config(format!("h must be nonnegative, got {}", self.h)));
        }
        if !self.x.is_finite() {
            return Err(HarnessError::Config(format!("x must be finite, got {}", self.x)));
        }
        if !(self.dy > 0.0 && self.dy <= 0.01) {
            return Err(HarnessError::Config(format!("dy must lie in (0, 0.01], got {}", self.dy)));
        }
        let counts = [
            ("n", self.n),
            ("site_budget", self.site_budget),
            ("event_budget", self.event_budget),
            ("n_per_node", self.n_per_node),
            ("rbm_n", self.rbm_n),
        ];
        for (name, value) in counts {
            if value == 0 {
                return Err(HarnessError::Config(format!("{name} must be at least 1")));
            }
        }
        if self.a_values.is_empty() || self.a_values.iter().any(|&a| !a.is_finite() || a < 4.0)
        {
            return Err(HarnessError::Config(format!(
                "a_values must be nonempty with every scale at least 4, got {:?}",
                self.a_values
            )));
        }
        for (name, grid) in [
            ("t_grid", &self.t_grid),
            ("tail_t_grid", &self.tail_t_grid),
            ("x_grid", &self.x_grid),
        ] {
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(HarnessError::Config(format!("{name} must be finite, got {grid:?}")));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(HarnessError::Config(format!(
                    "{name} must be strictly increasing, got {grid:?}"
                )));
            }
        }
        for (name, grid) in [("t_grid", &self.t_grid), ("tail_t_grid", &self.tail_t_grid)] {
            if grid.is_empty() || grid[0] <= 0.0 {
                return Err(HarnessError::Config(format!(
                    "{name} must be nonempty and positive, got {grid:?}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_exist_and_validate() {
        for name in EXPERIMENTS {
            let cfg = ExperimentConfig::preset(name).unwrap();
            assert_eq!(cfg.experiment, name);
            cfg.validate().unwrap();
        }
        assert!(matches!(
            ExperimentConfig::preset("nope"),
            Err(HarnessError::UnknownExperiment { .. })
        ));
    }

    #[test]
    fn validate_rejects_out_of_domain_fields() {
        let ok = ExperimentConfig::preset("t_scaling").unwrap();
        let cases: Vec<(&str, ExperimentConfig)> = vec![
            ("experiment", ExperimentConfig { experiment: "bogus".into(), ..ok.clone() }),
            ("r", ExperimentConfig { r: 0.0, ..ok.clone() }),
            ("dy", ExperimentConfig { dy: 0.5, ..ok.clone() }),
            ("n", ExperimentConfig { n: 0, ..ok.clone() }),
            ("a_values", ExperimentConfig { a_values: vec![], ..ok.clone() }),
            ("t_grid", ExperimentConfig { t_grid: vec![2.0, 1.0], ..ok.clone() }),
            (
                "model",
                ExperimentConfig {
                    model: WeightModel::Step { low: 3.0, high: 2.0 },
                    ..ok.clone()
                },
            ),
        ];
        for (hint, cfg) in cases {
            assert!(cfg.validate().is_err(), "expected rejection via {hint}");
        }
        ok.validate().unwrap();
    }

    #[test]
    fn json_round_trip_preserves_config() {
        let cfg = ExperimentConfig::preset("local_limit").unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_json_fills_defaults_and_rejects_unknown_keys() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"experiment":"t_scaling","n":77}"#).unwrap();
        assert_eq!(cfg.n, 77);
        assert_eq!(cfg.r, 2.0);
        assert_eq!(cfg.model, WeightModel::Step { low: 1.0, high: 2.0 });
        let bad = serde_json::from_str::<ExperimentConfig>(r#"{"replicas":10}"#);
        assert!(bad.is_err());
    }
}
