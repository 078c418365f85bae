//! Reads the gap process of one edge off a walk trajectory: how much
//! edge-local time accumulates, how often the walk crosses the edge, and the
//! gap value seen at a few clock times.

use tsaw::rng::{self, tag};
use tsaw::walk::{extract_edge_processes, run_until_inverse_local_time};
use tsaw::weights::WeightModel;

fn main() {
    let model = WeightModel::step(1.0, 2.0).expect("valid model");
    let mut stream = rng::stream(19, 0, tag::WALK);
    let (time, trajectory) =
        run_until_inverse_local_time(model, 0, 4.0, &mut stream, 1_000_000).expect("within budget");
    println!("trajectory stopped at clock {time:.4}");

    let path = extract_edge_processes(&trajectory, 0).expect("edge is touched");
    println!(
        "edge ({}, {}): first touch from side {:+}, {} crossings, edge-local duration {:.4}",
        path.edge,
        path.edge + 1,
        path.alpha0,
        path.flips.len(),
        path.duration
    );
    for t in [0.5, 2.0, 8.0] {
        if t > time {
            continue;
        }
        println!(
            "  clock {t:>4.1}: edge-local time {:.4}, gap {:+.4}",
            path.tau_at(t),
            path.xi_at(path.tau_at(t))
        );
    }
    println!(
        "  end state: side {:+}, gap {:+.4}",
        path.terminal_alpha, path.terminal_xi
    );
}
