//! Stopped local-time profiles built site-by-site from independent gap lines.
//!
//! The profile `Lambda` of the walk stopped when site `j` accumulates local
//! time `r` satisfies a spatial recursion: moving right from `j`, each next
//! value is the current one plus an independent `eta` line run for the
//! current value; moving left likewise with the mirrored initial laws.  Each
//! direction is absorbed at its first exact zero outside the interval
//! between 0 and `j`.  Building profiles this way — never simulating the
//! walk — and comparing against direct simulation is the core consistency
//! check of the lab.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::eta::{eta_evolve, EtaInit};
use crate::weights::WeightModel;

/// Errors from profile construction.
#[derive(Debug, Error, PartialEq)]
pub enum RayKnightError {
    /// The running total time exceeded the cap before absorption.
    #[error("running total exceeded the time cap {cap}")]
    TimeCapped { cap: f64 },
}

/// Which construction produced a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Event-driven walk simulation stopped at the inverse local time.
    Direct,
    /// Site-by-site recursion over independent gap lines.
    RayKnight,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Route::Direct => write!(f, "direct"),
            Route::RayKnight => write!(f, "ray_knight"),
        }
    }
}

/// Counters and markers for exceptional events during a build.
///
/// The two counters stay zero in practice; the truncation markers record a
/// direction that ran out of site budget before absorbing, in which case the
/// profile is partial on that side and its support end is a lower bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ProfileFlags {
    /// Exact zeros at sites strictly inside the interval between 0 and `j`.
    pub inner_zeros: u32,
    /// Negative values clamped to zero (rounding pathologies only).
    pub negative_clamps: u32,
    /// Left pass hit the site budget before absorbing.
    pub left_truncated: bool,
    /// Right pass hit the site budget before absorbing.
    pub right_truncated: bool,
}

/// A stopped local-time profile: heights per site plus its support ends.
#[derive(Debug, Clone)]
pub struct ProfileRealization {
    /// Site whose local time defines the stopping rule.
    pub origin: i64,
    /// Stopping level of the local time at the origin site.
    pub height: f64,
    /// Height per site, including the zero just beyond each absorbed end.
    pub values: BTreeMap<i64, f64>,
    /// Leftmost site with positive height (a lower bound if truncated).
    pub left_end: i64,
    /// Rightmost site with positive height (a lower bound if truncated).
    pub right_end: i64,
    /// Construction that produced the profile.
    pub route: Route,
    /// Anomaly counters from the build.
    pub flags: ProfileFlags,
}

impl ProfileRealization {
    /// Height at `site`, zero for sites outside the stored support.
    pub fn value_at(&self, site: i64) -> f64 {
        self.values.get(&site).copied().unwrap_or(0.0)
    }
}

/// Initial law of the gap line attached to edge `k` on the right-moving pass.
pub fn eta_minus_init(k: i64) -> EtaInit {
    if k >= 0 { EtaInit::Delta0 } else { EtaInit::Q0 }
}

/// Initial law of the gap line attached to edge `k` on the left-moving pass.
pub fn eta_plus_init(k: i64) -> EtaInit {
    if k >= 0 { EtaInit::Q0 } else { EtaInit::Delta0 }
}

/// Build a stopped profile by the site recursion.
///
/// Each direction stops at its first exact floating-point zero outside the
/// closed interval between 0 and `j`; the no-jump branch of the gap line
/// makes that zero algebraic, so no threshold is involved.  `max_sites`
/// bounds each direction; a direction that exhausts it is returned as-is
/// with its truncation flag set rather than discarded.
pub fn build_profile<R: Rng + ?Sized>(
    model: WeightModel,
    j: i64,
    r: f64,
    rng: &mut R,
    max_sites: usize,
) -> Result<ProfileRealization, RayKnightError> {
    build_profile_with_time_cap(model, j, r, rng, max_sites, f64::INFINITY)
}

/// [`build_profile`] that also abandons the build once the running sum of
/// heights exceeds `t_cap` — the sum only grows, so the overshoot test is
/// exact and lets heavy realizations be censored early and cheaply.
pub fn build_profile_with_time_cap<R: Rng + ?Sized>(
    model: WeightModel,
    j: i64,
    r: f64,
    rng: &mut R,
    max_sites: usize,
    t_cap: f64,
) -> Result<ProfileRealization, RayKnightError> {
    assert!(r > 0.0, "stopping level must be positive");
    let inner_lo = j.min(0);
    let inner_hi = j.max(0);
    let mut values = BTreeMap::new();
    values.insert(j, r);
    let mut flags = ProfileFlags::default();
    let mut total = r;
    if total > t_cap {
        return Err(RayKnightError::TimeCapped { cap: t_cap });
    }

    // Right-moving pass from the origin site.
    let mut level = r;
    let mut k = j;
    let mut sites = 0usize;
    loop {
        let mut next = level + eta_evolve(model, eta_minus_init(k), level, rng);
        if next < 0.0 {
            flags.negative_clamps += 1;
            next = 0.0;
        }
        k += 1;
        values.insert(k, next);
        total += next;
        if total > t_cap {
            return Err(RayKnightError::TimeCapped { cap: t_cap });
        }
        if next == 0.0 {
            if k > inner_hi {
                break;
            }
            flags.inner_zeros += 1;
        }
        level = next;
        sites += 1;
        if sites >= max_sites {
            flags.right_truncated = true;
            break;
        }
    }

    // Left-moving pass from the origin site.
    let mut level = r;
    let mut k = j;
    let mut sites = 0usize;
    loop {
        let mut next = level + eta_evolve(model, eta_plus_init(k - 1), level, rng);
        if next < 0.0 {
            flags.negative_clamps += 1;
            next = 0.0;
        }
        k -= 1;
        values.insert(k, next);
        total += next;
        if total > t_cap {
            return Err(RayKnightError::TimeCapped { cap: t_cap });
        }
        if next == 0.0 {
            if k < inner_lo {
                break;
            }
            flags.inner_zeros += 1;
        }
        level = next;
        sites += 1;
        if sites >= max_sites {
            flags.left_truncated = true;
            break;
        }
    }

    let left_end = *values.iter().find(|(_, &v)| v > 0.0).map(|(k, _)| k).unwrap();
    let right_end = *values.iter().rev().find(|(_, &v)| v > 0.0).map(|(k, _)| k).unwrap();
    Ok(ProfileRealization {
        origin: j,
        height: r,
        values,
        left_end,
        right_end,
        route: Route::RayKnight,
        flags,
    })
}

/// Total time represented by a profile: the sum of its heights.
pub fn total_time(profile: &ProfileRealization) -> f64 {
    profile.values.values().sum()
}

/// A profile resampled onto the diffusive scale.
#[derive(Debug, Clone)]
pub struct RescaledProfile {
    /// `(y, value)` pairs on the grid `y = site / a`.
    pub points: Vec<(f64, f64)>,
    /// Left support end divided by `a`.
    pub left_end: f64,
    /// Right support end divided by `a`.
    pub right_end: f64,
}

/// Rescale a profile: site `k` maps to `y = k/a` with value divided by
/// `sigma * sqrt(a)`.
pub fn rescale_profile(profile: &ProfileRealization, a: f64, sigma: f64) -> RescaledProfile {
    assert!(a >= 1.0 && sigma > 0.0);
    let denom = sigma * a.sqrt();
    let points = profile
        .values
        .iter()
        .map(|(&k, &v)| (k as f64 / a, v / denom))
        .collect();
    RescaledProfile {
        points,
        left_end: profile.left_end as f64 / a,
        right_end: profile.right_end as f64 / a,
    }
}

/// Write a profile as CSV: `site,local_time,route`.
pub fn write_profile_csv(
    path: &std::path::Path,
    profile: &ProfileRealization,
) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "site,local_time,route")?;
    for (k, v) in &profile.values {
        writeln!(out, "{},{},{}", k, v, profile.route)?;
    }
    Ok(())
}

/// Write a rescaled profile as CSV: `y,value`.
pub fn write_rescaled_csv(
    path: &std::path::Path,
    rescaled: &RescaledProfile,
) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "y,value")?;
    for (y, v) in &rescaled.points {
        writeln!(out, "{},{}", y, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn step12() -> WeightModel {
        WeightModel::step(1.0, 2.0).unwrap()
    }

    #[test]
    fn init_laws_by_edge_sign() {
        assert_eq!(eta_minus_init(0), EtaInit::Delta0);
        assert_eq!(eta_minus_init(3), EtaInit::Delta0);
        assert_eq!(eta_minus_init(-1), EtaInit::Q0);
        assert_eq!(eta_plus_init(0), EtaInit::Q0);
        assert_eq!(eta_plus_init(2), EtaInit::Q0);
        assert_eq!(eta_plus_init(-1), EtaInit::Delta0);
    }

    #[test]
    fn origin_height_is_exact_and_support_is_tight() {
        // Absorption times have a heavy tail, so a small fraction of builds
        // hits the time cap; those are skipped, mirroring the experiments.
        let model = step12();
        let mut rng = stream(20, 0, 0);
        let mut complete = 0;
        for _ in 0..200 {
            let Ok(p) = build_profile_with_time_cap(model, 0, 2.0, &mut rng, 1_000_000, 1e4)
            else {
                continue;
            };
            complete += 1;
            assert_eq!(p.value_at(0), 2.0);
            assert!(p.left_end <= 0 && p.right_end >= 0);
            // The site beyond each end is stored as an exact zero.
            assert_eq!(p.values[&(p.right_end + 1)], 0.0);
            assert_eq!(p.values[&(p.left_end - 1)], 0.0);
            for &v in p.values.values() {
                assert!(v >= 0.0);
            }
            assert_eq!(p.flags, ProfileFlags::default());
        }
        assert!(complete >= 150, "complete {complete}");
    }

    #[test]
    fn point_support_probability_matches_no_jump_survival() {
        // For level 0.5 at origin 0, both directions absorb immediately iff
        // their gap lines never jump: probability e^{-1} each, e^{-2} joint.
        let model = step12();
        let mut rng = stream(21, 0, 0);
        let n = 10_000;
        let mut hits = 0;
        for _ in 0..n {
            // A capped build is never the point-support event, so counting
            // it as a miss keeps the estimate unbiased.
            match build_profile_with_time_cap(model, 0, 0.5, &mut rng, 1_000_000, 1e4) {
                Ok(p) if p.left_end == 0 && p.right_end == 0 => hits += 1,
                _ => {}
            }
        }
        let p_hat = hits as f64 / n as f64;
        let target = (-2.0f64).exp();
        let sigma = (target * (1.0 - target) / n as f64).sqrt();
        assert!((p_hat - target).abs() < 3.0 * sigma, "p_hat {p_hat}");
    }

    #[test]
    fn inner_region_stays_positive() {
        // The inner sites are fixed before either direction can absorb, so
        // capped builds still carry them; check the flags on completes only.
        let model = step12();
        let mut rng = stream(22, 0, 0);
        for _ in 0..300 {
            match build_profile_with_time_cap(model, 3, 1.0, &mut rng, 1_000_000, 1e4) {
                Ok(p) => {
                    for k in 0..=3 {
                        assert!(p.value_at(k) > 0.0);
                    }
                    assert_eq!(p.flags.inner_zeros, 0);
                }
                Err(e) => assert_eq!(e, RayKnightError::TimeCapped { cap: 1e4 }),
            }
        }
        let mut rng = stream(22, 1, 0);
        for _ in 0..300 {
            match build_profile_with_time_cap(model, -2, 1.0, &mut rng, 1_000_000, 1e4) {
                Ok(p) => {
                    for k in -2..=0 {
                        assert!(p.value_at(k) > 0.0);
                    }
                    assert_eq!(p.flags.inner_zeros, 0);
                }
                Err(e) => assert_eq!(e, RayKnightError::TimeCapped { cap: 1e4 }),
            }
        }
    }

    #[test]
    fn point_support_total_time_is_the_height() {
        let model = step12();
        let mut rng = stream(23, 0, 0);
        loop {
            match build_profile_with_time_cap(model, 0, 0.5, &mut rng, 1_000_000, 1e4) {
                Ok(p) if p.left_end == 0 && p.right_end == 0 => {
                    assert_eq!(total_time(&p), 0.5);
                    break;
                }
                _ => {}
            }
        }
    }

    #[test]
    fn time_cap_rejects_immediately_when_below_height() {
        let model = step12();
        let mut rng = stream(24, 0, 0);
        let err =
            build_profile_with_time_cap(model, 0, 2.0, &mut rng, 100_000, 1.0).unwrap_err();
        assert_eq!(err, RayKnightError::TimeCapped { cap: 1.0 });
    }

    #[test]
    fn site_budget_flags_truncated_directions() {
        let model = step12();
        let mut rng = stream(25, 0, 0);
        // A tall profile cannot absorb within one site per direction, so the
        // build comes back partial with both truncation markers set.
        let p = build_profile(model, 0, 50.0, &mut rng, 1).unwrap();
        assert!(p.flags.left_truncated && p.flags.right_truncated);
        assert_eq!(p.value_at(0), 50.0);
        assert!(p.values.contains_key(&1) && p.values.contains_key(&-1));
        // A generous budget absorbs both directions and leaves them unset.
        let p = loop {
            if let Ok(p) = build_profile_with_time_cap(model, 0, 2.0, &mut rng, 1_000_000, 1e4) {
                break p;
            }
        };
        assert!(!p.flags.left_truncated && !p.flags.right_truncated);
    }

    #[test]
    fn rescale_at_unit_scale_is_identity() {
        let model = step12();
        let mut rng = stream(26, 0, 0);
        let p = loop {
            if let Ok(p) = build_profile_with_time_cap(model, 2, 1.0, &mut rng, 1_000_000, 1e4) {
                break p;
            }
        };
        let r = rescale_profile(&p, 1.0, 1.0);
        for ((y, v), (&k, &val)) in r.points.iter().zip(p.values.iter()) {
            assert_eq!(*y, k as f64);
            assert_eq!(*v, val);
        }
        assert_eq!(r.left_end, p.left_end as f64);
        assert_eq!(r.right_end, p.right_end as f64);
    }

    #[test]
    fn rescale_divides_origin_height() {
        let model = step12();
        let mut rng = stream(27, 0, 0);
        let p = loop {
            if let Ok(p) = build_profile_with_time_cap(model, 0, 2.0, &mut rng, 1_000_000, 1e4) {
                break p;
            }
        };
        let a = 4.0;
        let sigma = 1.5;
        let r = rescale_profile(&p, a, sigma);
        let at_origin = r.points.iter().find(|(y, _)| *y == 0.0).unwrap().1;
        assert!((at_origin - 2.0 / (sigma * 2.0)).abs() < 1e-15);
    }

    #[test]
    fn route_labels_render_as_snake_case() {
        assert_eq!(Route::Direct.to_string(), "direct");
        assert_eq!(Route::RayKnight.to_string(), "ray_knight");
        assert_eq!(serde_json::to_string(&Route::RayKnight).unwrap(), "\"ray_knight\"");
    }

    #[test]
    fn profile_csv_rows_are_site_ordered() {
        let model = step12();
        let mut rng = stream(28, 0, 0);
        let p = loop {
            if let Ok(p) = build_profile_with_time_cap(model, 0, 1.0, &mut rng, 1_000_000, 1e4) {
                break p;
            }
        };
        let dir = std::env::temp_dir().join("tsaw-rk-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("profile.csv");
        write_profile_csv(&path, &p).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "site,local_time,route");
        let sites: Vec<i64> =
            lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
        assert!(sites.windows(2).all(|w| w[0] < w[1]));
        std::fs::remove_dir_all(&dir).ok();
    }
}
