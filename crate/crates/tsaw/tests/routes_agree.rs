//! The direct walk and the recursion build the same stopped profile law.
//! Small-sample spot check; the full comparison battery lives in the
//! `rk_vs_direct` experiment.

use tsaw::ray_knight::{build_profile_with_time_cap, total_time};
use tsaw::rng::{self, tag};
use tsaw::stats::ks_two_sample;
use tsaw::walk::{local_time_profile, run_until_inverse_local_time_capped, WalkError};
use tsaw::weights::WeightModel;

const N: u64 = 500;
const T_CAP: f64 = 1_000.0;

#[test]
fn stopping_time_laws_match_across_routes() {
    let model = WeightModel::step(1.0, 2.0).expect("valid model");
    let (j, r) = (0i64, 1.0);

    let mut direct_times = Vec::new();
    for i in 0..N {
        let mut stream = rng::stream(77, i, tag::WALK);
        match run_until_inverse_local_time_capped(model, j, r, &mut stream, 10_000_000, T_CAP) {
            Ok((time, trajectory)) => {
                let profile = local_time_profile(&trajectory, j, r);
                assert!((total_time(&profile) - time).abs() <= 1e-6 * time.max(1.0));
                direct_times.push(time);
            }
            Err(WalkError::TimeCapped { .. }) => direct_times.push(f64::INFINITY),
            Err(other) => panic!("direct route failed: {other}"),
        }
    }

    let mut recursion_times = Vec::new();
    for i in 0..N {
        let mut stream = rng::stream(78, i, tag::PROFILE);
        match build_profile_with_time_cap(model, j, r, &mut stream, 200_000, T_CAP) {
            Ok(profile) if !profile.flags.left_truncated && !profile.flags.right_truncated => {
                recursion_times.push(total_time(&profile));
            }
            _ => recursion_times.push(f64::INFINITY),
        }
    }

    let censored = |v: &[f64]| v.iter().filter(|t| !t.is_finite()).count();
    let (ca, cb) = (censored(&direct_times), censored(&recursion_times));
    assert!(
        (ca as f64 - cb as f64).abs() < 5.0 * (N as f64 * 0.25).sqrt(),
        "censor counts diverge: direct {ca}, recursion {cb}"
    );

    let ks = ks_two_sample(&direct_times, &recursion_times).expect("enough samples");
    assert!(
        ks.p_value > 1e-4,
        "stopping-time laws diverge: D = {:.4}, p = {:.2e}",
        ks.statistic,
        ks.p_value
    );
}
