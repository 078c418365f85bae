//! Prints closed-form and tabulated summaries of two weight models: the
//! normalizer and variance of the stationary gap law, the support radius the
//! tables use, and a few quantiles.

use tsaw::weights::{StationaryTables, WeightModel};

fn main() {
    let models = [
        WeightModel::step(1.0, 2.0).expect("valid model"),
        WeightModel::exponential(1.0).expect("valid model"),
    ];
    for model in models {
        let tables = StationaryTables::build(model);
        println!("{model:?}");
        println!("  normalizing constant  {:.12}", tables.z);
        println!("  stationary variance   {:.12}", tables.variance);
        println!("  tabulated on [-R, R]  R = {:.3}", tables.radius);
        for p in [0.25, 0.5, 0.9] {
            println!("  quantile({p:.2})        {:+.6}", tables.quantile(p));
        }
        println!();
    }
}
