//! Experiment reports: typed pass/fail checks plus free-form notes,
//! serialized as pretty JSON and a flat CSV.
//!
//! Serialized bytes are a pure function of the checks, notes, seed, and
//! configuration; the wall-clock field is kept out of serialization so a
//! rerun with the same seed produces an identical file.

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;

/// One named pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Stable identifier of the check within its experiment.
    pub name: String,
    /// Observed statistic.
    pub statistic: f64,
    /// Bound the statistic was compared against (or the test level).
    pub threshold: f64,
    /// Attained p-value, for checks with a distributional reference.
    pub p_value: Option<f64>,
    /// Sample count behind the statistic.
    pub n: u64,
    /// Verdict; any NaN comparison fails.
    pub passed: bool,
}

impl CheckResult {
    /// Pass when `statistic < threshold`.
    pub fn below(name: &str, statistic: f64, threshold: f64, p_value: Option<f64>, n: u64) -> Self {
        CheckResult {
            name: name.to_owned(),
            statistic,
            threshold,
            p_value,
            n,
            passed: statistic < threshold,
        }
    }

    /// Pass when `statistic > threshold`.
    pub fn above(name: &str, statistic: f64, threshold: f64, p_value: Option<f64>, n: u64) -> Self {
        CheckResult {
            name: name.to_owned(),
            statistic,
            threshold,
            p_value,
            n,
            passed: statistic > threshold,
        }
    }

    /// Pass when `statistic <= threshold`.
    pub fn at_most(name: &str, statistic: f64, threshold: f64, n: u64) -> Self {
        CheckResult {
            name: name.to_owned(),
            statistic,
            threshold,
            p_value: None,
            n,
            passed: statistic <= threshold,
        }
    }

    /// Pass when the p-value attains the significance level `alpha`.
    pub fn level(name: &str, statistic: f64, p_value: f64, alpha: f64, n: u64) -> Self {
        CheckResult {
            name: name.to_owned(),
            statistic,
            threshold: alpha,
            p_value: Some(p_value),
            n,
            passed: p_value >= alpha,
        }
    }
}

/// Outcome of one experiment run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestReport {
    /// Experiment name.
    pub experiment: String,
    /// Master seed the run was derived from.
    pub master_seed: u64,
    /// Configuration the run used.
    pub config: ExperimentConfig,
    /// All checks, in a fixed order per experiment.
    pub checks: Vec<CheckResult>,
    /// Scalar observations worth keeping that are not pass/fail checks.
    pub notes: Vec<String>,
    /// True when every check passed.
    pub passed: bool,
    /// Run duration in seconds; excluded from serialization.
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl TestReport {
    /// Assemble a report; the verdict is the conjunction of the checks.
    pub fn new(
        config: ExperimentConfig,
        master_seed: u64,
        checks: Vec<CheckResult>,
        notes: Vec<String>,
    ) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        TestReport {
            experiment: config.experiment.clone(),
            master_seed,
            config,
            checks,
            notes,
            passed,
            wall_clock_seconds: 0.0,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Write `report.json` and `checks.csv` into `dir`.
    pub fn emit(&self, dir: &std::path::Path) -> Result<(), super::HarnessError> {
        use std::io::Write;
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        let mut out = std::io::BufWriter::new(std::fs::File::create(dir.join("checks.csv"))?);
        writeln!(out, "name,statistic,threshold,p_value,n,passed")?;
        for c in &self.checks {
            let p = c.p_value.map(|p| p.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{}",
                c.name, c.statistic, c.threshold, p, c.n, c.passed
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> TestReport {
        let cfg = ExperimentConfig::preset("eta_stationarity").unwrap();
        TestReport::new(
            cfg,
            7,
            vec![
                CheckResult::below("distance", 0.01, 0.02, Some(0.6), 100),
                CheckResult::above("rate", 0.8, 0.0, None, 100),
            ],
            vec!["note".into()],
        )
    }

    #[test]
    fn constructors_encode_the_right_comparisons() {
        assert!(CheckResult::below("d", 0.5, 1.0, None, 1).passed);
        assert!(!CheckResult::below("d", 1.0, 1.0, None, 1).passed);
        assert!(CheckResult::above("g", 0.1, 0.0, None, 1).passed);
        assert!(CheckResult::at_most("c", 5.0, 5.0, 1).passed);
        assert!(!CheckResult::at_most("c", 5.1, 5.0, 1).passed);
        assert!(CheckResult::level("k", 0.02, 0.3, 0.001, 1).passed);
        assert!(!CheckResult::level("k", 0.08, 0.0005, 0.001, 1).passed);
    }

    #[test]
    fn nan_statistics_fail_closed() {
        assert!(!CheckResult::below("d", f64::NAN, 1.0, None, 1).passed);
        assert!(!CheckResult::above("g", f64::NAN, 0.0, None, 1).passed);
        assert!(!CheckResult::at_most("c", f64::NAN, 5.0, 1).passed);
        assert!(!CheckResult::level("k", 0.1, f64::NAN, 0.001, 1).passed);
    }

    #[test]
    fn verdict_is_conjunction_of_checks() {
        let mut report = sample_report();
        assert!(report.passed);
        report.checks.push(CheckResult::below("bad", 2.0, 1.0, None, 10));
        let rebuilt = TestReport::new(
            report.config.clone(),
            report.master_seed,
            report.checks.clone(),
            vec![],
        );
        assert!(!rebuilt.passed);
    }

    #[test]
    fn json_omits_wall_clock_and_round_trips() {
        let mut report = sample_report();
        report.wall_clock_seconds = 12.5;
        let text = report.to_json().unwrap();
        assert!(!text.contains("wall_clock"));
        assert!(text.ends_with('\n'));
        let back: TestReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.wall_clock_seconds, 0.0);
        assert_eq!(back.checks, report.checks);
    }

    #[test]
    fn emit_writes_report_and_csv() {
        let dir = tempfile::tempdir().unwrap();
        let report = sample_report();
        report.emit(dir.path()).unwrap();
        let json = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
        assert_eq!(json, report.to_json().unwrap());
        let csv = std::fs::read_to_string(dir.path().join("checks.csv")).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("name,statistic,threshold,p_value,n,passed"));
        assert_eq!(lines.next(), Some("distance,0.01,0.02,0.6,100,true"));
        assert_eq!(lines.next(), Some("rate,0.8,0,,100,true"));
    }
}
