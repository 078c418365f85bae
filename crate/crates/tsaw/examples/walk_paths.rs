//! Simulates the self-repelling walk two ways: to a fixed clock, and to the
//! inverse local time at the origin, printing the resulting range and the
//! local-time profile near the starting point.

use tsaw::rng::{self, tag};
use tsaw::walk::{run_until_inverse_local_time, run_until_time};
use tsaw::weights::WeightModel;

fn main() {
    let model = WeightModel::step(1.0, 2.0).expect("valid model");
    let budget = 1_000_000;

    let mut stream = rng::stream(7, 0, tag::WALK);
    let state = run_until_time(model, 200.0, &mut stream, budget).expect("within budget");
    println!(
        "clock {:.1}: position {:+}, {} distinct sites visited",
        state.clock,
        state.position,
        state.local_times().len()
    );

    let (time, trajectory) =
        run_until_inverse_local_time(model, 0, 2.0, &mut stream, budget).expect("within budget");
    println!(
        "local time at the origin reached 2.0 at clock {:.4} after {} jumps",
        time,
        trajectory.events.len()
    );
    println!("profile around the origin at that moment:");
    for site in -3i64..=3 {
        let ell = trajectory.final_state.local_time(site);
        println!("  site {site:+}: {ell:.4}");
    }
}
