//! Tracks the distance to stationarity of the environment process started
//! from two initial laws: a point mass at zero and the jump kernel out of
//! zero.  Both relax exponentially fast to the same stationary gap law.

use tsaw::eta::{convergence_probe, EtaInit};
use tsaw::rng::{self, tag};
use tsaw::weights::{StationaryTables, WeightModel};

fn main() {
    let model = WeightModel::step(1.0, 2.0).expect("valid model");
    let tables = StationaryTables::build(model);
    let n = 20_000;
    for (label, init) in [("point mass at 0", EtaInit::Delta0), ("jump kernel at 0", EtaInit::Q0)] {
        println!("{label}:");
        for (i, t) in [1.0, 3.0, 6.0, 10.0].into_iter().enumerate() {
            let mut stream = rng::stream(11, i as u64, tag::ETA);
            let distance = convergence_probe(&tables, init, t, n, &mut stream);
            println!("  t = {t:>4}: histogram distance {distance:.4}");
        }
    }
    println!("(the residual floor is the sampling noise of {n} replicas)");
}
