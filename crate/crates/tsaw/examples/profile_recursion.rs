//! Builds a stopped local-time profile by the outward recursion over
//! independent environment processes — no walk is simulated — then rescales
//! it onto the diffusive scale.

use tsaw::ray_knight::{build_profile, rescale_profile, total_time};
use tsaw::rng::{self, tag};
use tsaw::weights::WeightModel;

fn main() {
    let model = WeightModel::step(1.0, 2.0).expect("valid model");
    let mut stream = rng::stream(3, 0, tag::PROFILE);
    let profile = build_profile(model, 2, 1.5, &mut stream, 100_000).expect("within budget");
    println!(
        "profile stopped at height {} over site {}: support [{}, {}]",
        profile.height, profile.origin, profile.left_end, profile.right_end
    );
    println!("implied stopping time (sum of heights) {:.4}", total_time(&profile));
    println!("heights around the stopping site:");
    for site in (profile.origin - 3).max(profile.left_end)..=(profile.origin + 3).min(profile.right_end) {
        println!("  site {site:+}: {:.4}", profile.value_at(site));
    }

    let sigma = model.stationary_variance().sqrt();
    let rescaled = rescale_profile(&profile, 4.0, sigma);
    println!(
        "rescaled by a = 4: support [{:.2}, {:.2}], {} grid points",
        rescaled.left_end,
        rescaled.right_end,
        rescaled.points.len()
    );
}
