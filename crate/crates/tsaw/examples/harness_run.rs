//! Runs one harness experiment at reduced size through the library API and
//! prints its checks — the same path the `tsaw` binary drives.

use tsaw::harness::config::ExperimentConfig;
use tsaw::harness::experiments::run_experiment;

fn main() {
    let mut cfg = ExperimentConfig::preset("hitting_tails").expect("known experiment");
    cfg.n = 500;
    let out = std::env::temp_dir().join("tsaw-harness-example");
    let report = run_experiment(&cfg, 123, Some(&out)).expect("experiment runs");
    for check in &report.checks {
        let verdict = if check.passed { "pass" } else { "FAIL" };
        println!("{:<28} {:>10.4}  {verdict}", check.name, check.statistic);
    }
    println!(
        "overall: {} (artifacts in {})",
        if report.passed { "pass" } else { "FAIL" },
        out.display()
    );
}
