//! Monte Carlo estimates of the continuum reference objects: the marginal of
//! a two-sided reflected Brownian path at a fixed offset against its
//! closed-form law, and the Laplace-transformed area density at one point.

use tsaw::continuum::{absorbed_height_cdf, estimate_omega_hat, simulate_reflected_bm};
use tsaw::rng::{self, tag};

fn main() {
    let (h, dy) = (1.0, 1e-3f64);
    let n = 2_000;
    let offset = 0.5;
    let mut stream = rng::stream(29, 0, tag::RBM);

    let mut below = [0usize; 3];
    let probes = [0.0, 0.5, 1.5];
    let cell = (offset / dy).round() as usize;
    for _ in 0..n {
        let path = simulate_reflected_bm(0.0, h, dy, &mut stream, 400.0);
        // Paths absorbed before the offset contribute the atom at zero.
        let value = path.right_values.get(cell).copied().unwrap_or(0.0);
        for (count, &z) in below.iter_mut().zip(&probes) {
            if value <= z {
                *count += 1;
            }
        }
    }
    println!("path value {offset} to the right of the anchor (0, {h}):");
    for (count, &z) in below.iter().zip(&probes) {
        println!(
            "  P(value <= {z:.1}): empirical {:.4}, closed form {:.4}",
            *count as f64 / n as f64,
            absorbed_height_cdf(offset, h, z)
        );
    }

    let (estimate, stderr) = estimate_omega_hat(1.0, 0.5, 1.0, n, dy, &mut stream);
    println!("area transform at s = 1, anchor (0.5, 1): {estimate:.4} +- {stderr:.4}");
}
