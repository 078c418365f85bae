//! Full acceptance battery: every statistical criterion the lab is expected
//! to meet, at its stated tolerance, one pass/fail line each.  This is the
//! slow gate — `--quick` variants live in the binary, not here.

use tsaw::harness::acceptance::{run_acceptance, summary_lines};

#[test]
fn acceptance_battery_passes() {
    let out = std::env::temp_dir().join("tsaw-acceptance");
    let run = run_acceptance(20_260_817, false, Some(&out)).expect("battery runs");
    for line in summary_lines(&run) {
        println!("{line}");
    }
    assert!(
        run.passed,
        "acceptance battery failed; details in {}",
        out.display()
    );
}
