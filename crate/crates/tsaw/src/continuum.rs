//! Limiting objects: reflected Brownian paths, absorption areas, and the
//! Laplace-transform estimators behind the density comparison.
//!
//! A two-sided path anchored at `(x, h)` carries the absolute value of an
//! underlying Brownian motion simulated on a `dy` grid; zero-hitting beyond
//! the interval between 0 and `x` is detected on the underlying motion by
//! sign change, exact zero, or a Brownian-bridge crossing draw inside a
//! same-sign step — never by thresholding the reflected values.  The area
//! under the absorbed path feeds `omega_hat(s, x, h) = s·E[exp(-s·area)]`
//! and its `h`-integral `phi_hat(s, x)`, estimated with a shared area
//! ensemble per grid node so several `s` values can be read off the same
//! randomness.

use rand::Rng;

use crate::rng::{normal, unit};
use crate::stats::normal_cdf;

/// A two-sided reflected Brownian path absorbed at its outer zeros.
///
/// A direction that runs past the span budget before hitting zero is kept
/// as simulated with its truncation flag set and an infinite zero location,
/// so the completed side of the path is never lost.
#[derive(Debug, Clone)]
pub struct ReflectedBmPath {
    /// Anchor abscissa.
    pub anchor: f64,
    /// Anchor height.
    pub height: f64,
    /// Grid step.
    pub dy: f64,
    /// Values on the grid `anchor, anchor + dy, …`, absorption excluded.
    pub right_values: Vec<f64>,
    /// Values on the grid `anchor, anchor - dy, …`, absorption excluded.
    pub left_values: Vec<f64>,
    /// Location of the right absorption zero; `+inf` when truncated.
    pub right_zero: f64,
    /// Location of the left absorption zero; `-inf` when truncated.
    pub left_zero: f64,
    /// Right direction exhausted the span budget before absorbing.
    pub right_truncated: bool,
    /// Left direction exhausted the span budget before absorbing.
    pub left_truncated: bool,
}

/// The area under an absorbed path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaSample {
    /// Trapezoidal area between the two absorption zeros.
    pub value: f64,
    /// Grid step used.
    pub dy: f64,
}

/// Outcome of a streamed area draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaOutcome {
    /// Both directions absorbed within the budgets.
    Complete { area: f64 },
    /// The running area passed `area_cap`; the true area exceeds it too.
    AreaCapped,
    /// A direction exceeded its span budget first.
    SpanCapped,
}

/// How one direction of the underlying motion ended.
enum DirectionEnd {
    /// Absorbed at this location.
    Zero(f64),
    /// Span budget exhausted before absorption.
    Spanned,
    /// The visitor stopped the walk.
    Halted,
}

/// One direction of the underlying motion, streamed step by step.
///
/// `armed_from` is the boundary beyond which zero-hitting is active; steps
/// whose starting node lies short of it only reflect.  Calls `visit` with
/// each retained grid value after the anchor.
#[allow(clippy::too_many_arguments)]
fn run_direction<R: Rng + ?Sized>(
    start: f64,
    sign: f64,
    anchor_y: f64,
    armed_from: f64,
    dy: f64,
    span_cap: f64,
    rng: &mut R,
    mut visit: impl FnMut(f64, f64) -> bool,
) -> DirectionEnd {
    // Distances are measured along the direction of travel, so one code
    // path serves both sides: `pos` is the signed offset from the anchor.
    let armed_offset = sign * (armed_from - anchor_y);
    let mut b = start;
    let mut pos = 0.0f64;
    if pos >= armed_offset && b == 0.0 {
        return DirectionEnd::Zero(anchor_y);
    }
    let sqrt_dy = dy.sqrt();
    loop {
        if pos > span_cap {
            return DirectionEnd::Spanned;
        }
        let b_next = b + sqrt_dy * normal(rng);
        let armed = pos >= armed_offset;
        if armed {
            if b_next == 0.0 {
                return DirectionEnd::Zero(anchor_y + sign * (pos + dy));
            }
            if (b > 0.0) != (b_next > 0.0) {
                // Sign change: place the zero by linear interpolation.
                let frac = b / (b - b_next);
                return DirectionEnd::Zero(anchor_y + sign * (pos + frac * dy));
            }
            // Same sign: the bridge may still have dipped through zero.
            let p_cross = (-2.0 * b * b_next / dy).exp();
            if unit(rng) < p_cross {
                return DirectionEnd::Zero(anchor_y + sign * (pos + 0.5 * dy));
            }
        }
        pos += dy;
        b = b_next;
        if !visit(b.abs(), anchor_y + sign * pos) {
            return DirectionEnd::Halted;
        }
    }
}

/// Simulate a two-sided reflected Brownian path anchored at `(x, h)`,
/// absorbed at its first zeros beyond the interval between 0 and `x`.
pub fn simulate_reflected_bm<R: Rng + ?Sized>(
    x: f64,
    h: f64,
    dy: f64,
    rng: &mut R,
    span_cap: f64,
) -> ReflectedBmPath {
    assert!(h >= 0.0 && dy > 0.0 && dy <= 0.01);
    let mut right_values = vec![h];
    let right = run_direction(h, 1.0, x, x.max(0.0), dy, span_cap, rng, |v, _| {
        right_values.push(v);
        true
    });
    let (right_zero, right_truncated) = match right {
        DirectionEnd::Zero(z) => (z, false),
        DirectionEnd::Spanned => (f64::INFINITY, true),
        DirectionEnd::Halted => unreachable!("unbounded visitor never stops the walk"),
    };
    let mut left_values = vec![h];
    let left = run_direction(h, -1.0, x, x.min(0.0), dy, span_cap, rng, |v, _| {
        left_values.push(v);
        true
    });
    let (left_zero, left_truncated) = match left {
        DirectionEnd::Zero(z) => (z, false),
        DirectionEnd::Spanned => (f64::NEG_INFINITY, true),
        DirectionEnd::Halted => unreachable!("unbounded visitor never stops the walk"),
    };
    ReflectedBmPath {
        anchor: x,
        height: h,
        dy,
        right_values,
        left_values,
        right_zero,
        left_zero,
        right_truncated,
        left_truncated,
    }
}

fn one_sided_area(values: &[f64], dy: f64, grid_span: f64, zero_offset: f64) -> f64 {
    let mut area = 0.0;
    for w in values.windows(2) {
        area += 0.5 * (w[0] + w[1]) * dy;
    }
    // Triangle from the last retained node down to the zero location.
    let last = *values.last().unwrap();
    let tail = zero_offset - grid_span;
    if tail > 0.0 && tail.is_finite() {
        area += 0.5 * last * tail;
    }
    area
}

/// Trapezoidal area of an absorbed path between its two zeros; for a
/// truncated direction the area stops at the last simulated node.
pub fn area(path: &ReflectedBmPath) -> AreaSample {
    let right_span = (path.right_values.len() - 1) as f64 * path.dy;
    let left_span = (path.left_values.len() - 1) as f64 * path.dy;
    let value = one_sided_area(
        &path.right_values,
        path.dy,
        right_span,
        path.right_zero - path.anchor,
    ) + one_sided_area(&path.left_values, path.dy, left_span, path.anchor - path.left_zero);
    AreaSample { value, dy: path.dy }
}

/// Draw one area without storing the path, stopping early once the running
/// area passes `area_cap` — the area only grows, so the capped event is hit
/// exactly.
pub fn sample_area<R: Rng + ?Sized>(
    x: f64,
    h: f64,
    dy: f64,
    area_cap: f64,
    span_cap: f64,
    rng: &mut R,
) -> AreaOutcome {
    let mut total = 0.0f64;
    for sign in [1.0, -1.0] {
        let armed_from = if sign > 0.0 { x.max(0.0) } else { x.min(0.0) };
        let mut prev = h;
        let mut grid_off = 0.0f64;
        let mut capped = false;
        let outcome = run_direction(h, sign, x, armed_from, dy, span_cap, rng, |v, _| {
            total += 0.5 * (prev + v) * dy;
            prev = v;
            grid_off += dy;
            if total > area_cap {
                capped = true;
                return false;
            }
            true
        });
        match outcome {
            DirectionEnd::Spanned => return AreaOutcome::SpanCapped,
            DirectionEnd::Halted => {
                debug_assert!(capped);
                return AreaOutcome::AreaCapped;
            }
            DirectionEnd::Zero(zero) => {
                let tail = sign * (zero - x) - grid_off;
                if tail > 0.0 {
                    total += 0.5 * prev * tail;
                }
                if total > area_cap {
                    return AreaOutcome::AreaCapped;
                }
            }
        }
    }
    AreaOutcome::Complete { area: total }
}

/// Draw `n` areas, encoding capped draws as `+inf`.
pub fn collect_areas<R: Rng + ?Sized>(
    x: f64,
    h: f64,
    n: usize,
    dy: f64,
    area_cap: f64,
    span_cap: f64,
    rng: &mut R,
) -> Vec<f64> {
    (0..n)
        .map(|_| match sample_area(x, h, dy, area_cap, span_cap, rng) {
            AreaOutcome::Complete { area } => area,
            _ => f64::INFINITY,
        })
        .collect()
}

/// Evaluate `omega_hat(s) = s·mean(exp(-s·area))` and its standard error on
/// an existing ensemble; infinite (capped) areas contribute zero.
pub fn omega_hat_from_areas(s: f64, areas: &[f64]) -> (f64, f64) {
    let n = areas.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &a in areas {
        let v = if a.is_infinite() { 0.0 } else { (-s * a).exp() };
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (s * mean, s * (var / n).sqrt())
}

/// Monte Carlo estimate of `omega_hat(s, x, h)` with `n` fresh areas.
pub fn estimate_omega_hat<R: Rng + ?Sized>(
    s: f64,
    x: f64,
    h: f64,
    n: usize,
    dy: f64,
    rng: &mut R,
) -> (f64, f64) {
    assert!(s > 0.0 && n >= 1000);
    let areas = collect_areas(x, h, n, dy, 46.0 / s, 400.0, rng);
    omega_hat_from_areas(s, &areas)
}

/// A `phi_hat(s, x)` estimate with its error budget and integration window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiHatEstimate {
    /// Laplace variable.
    pub s: f64,
    /// Spatial argument.
    pub x: f64,
    /// Estimated density value.
    pub estimate: f64,
    /// Monte Carlo error plus the trapezoid refinement error.
    pub stderr: f64,
    /// Adaptive upper integration limit over the anchor height.
    pub h_max: f64,
    /// Area draws per height node.
    pub n_per_node: usize,
    /// Grid step of the underlying paths.
    pub dy: f64,
}

/// Number of trapezoid cells in the height integral.
const PHI_CELLS: usize = 64;

/// Estimate `phi_hat(s, x) = ∫_0^∞ omega_hat(s, x, h) dh` for every `s` in
/// `s_values` from shared area ensembles.
///
/// The upper limit is chosen adaptively (coarse scan until the integrand
/// tail falls below 1e-3 of the running integral for every `s`), then a
/// fixed 64-cell trapezoid is evaluated with `n_per_node` areas per node;
/// the reported error adds the half-grid Richardson estimate to the
/// propagated Monte Carlo error.  Randomness is keyed: `make_rng(key)`
/// must return an independent generator per key, which makes the estimate
/// a pure function of the key map and lets the nodes run in parallel.
pub fn estimate_phi_hat<R, F>(
    s_values: &[f64],
    x: f64,
    n_per_node: usize,
    dy: f64,
    make_rng: F,
) -> Vec<PhiHatEstimate>
where
    R: Rng,
    F: Fn(u64) -> R + Sync,
{
    use rayon::prelude::*;

    assert!(!s_values.is_empty() && s_values.iter().all(|&s| s > 0.0));
    let s_min = s_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let area_cap = 46.0 / s_min;
    let span_cap = 400.0;

    // Coarse scan for the adaptive window; scan keys sit far above the
    // node keys so the two phases never share a stream.
    let scan_step = 0.5;
    let scan_n = 400;
    let mut running: Vec<f64> = vec![0.0; s_values.len()];
    let mut h = scan_step;
    let mut scan_key = 1_000_000u64;
    let h_max = loop {
        let mut rng = make_rng(scan_key);
        scan_key += 1;
        let areas = collect_areas(x, h, scan_n, dy, area_cap, span_cap, &mut rng);
        let mut all_small = true;
        for (i, &s) in s_values.iter().enumerate() {
            let (est, _) = omega_hat_from_areas(s, &areas);
            running[i] += est * scan_step;
            if est * scan_step >= 1e-3 * running[i] {
                all_small = false;
            }
        }
        if h >= 2.0 && all_small {
            break h;
        }
        h += scan_step;
        if h > 40.0 {
            break 40.0;
        }
    };

    // Fixed trapezoid on [0, h_max] with shared ensembles per node.
    let step = h_max / PHI_CELLS as f64;
    let per_node: Vec<Vec<(f64, f64)>> = (0..=PHI_CELLS as u64)
        .into_par_iter()
        .map(|node| {
            let mut rng = make_rng(node);
            let h = node as f64 * step;
            let areas = collect_areas(x, h, n_per_node, dy, area_cap, span_cap, &mut rng);
            s_values.iter().map(|&s| omega_hat_from_areas(s, &areas)).collect()
        })
        .collect();
    let mut node_est = vec![vec![0.0f64; PHI_CELLS + 1]; s_values.len()];
    let mut node_err = vec![vec![0.0f64; PHI_CELLS + 1]; s_values.len()];
    for (node, row) in per_node.iter().enumerate() {
        for (i, &(est, err)) in row.iter().enumerate() {
            node_est[i][node] = est;
            node_err[i][node] = err;
        }
    }
    s_values
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let trapezoid = |stride: usize| {
                let mut sum = 0.0;
                let mut node = 0;
                while node + stride <= PHI_CELLS {
                    sum += 0.5
                        * (node_est[i][node] + node_est[i][node + stride])
                        * (stride as f64 * step);
                    node += stride;
                }
                sum
            };
            let full = trapezoid(1);
            let half = trapezoid(2);
            let quad_err = (full - half).abs() / 3.0;
            let mut mc_var = 0.0;
            for (node, &err) in node_err[i].iter().enumerate() {
                let w = if node == 0 || node == PHI_CELLS { 0.5 * step } else { step };
                mc_var += (w * err).powi(2);
            }
            PhiHatEstimate {
                s,
                x,
                estimate: full,
                stderr: mc_var.sqrt() + quad_err,
                h_max,
                n_per_node,
                dy,
            }
        })
        .collect()
}

/// CDF of the absorbed motion's height at offset `y > 0` past the arming
/// boundary, started from `h`: the absorbed mass sits as an atom at zero.
pub fn absorbed_height_cdf(y: f64, h: f64, z: f64) -> f64 {
    assert!(y > 0.0 && h >= 0.0);
    if z < 0.0 {
        return 0.0;
    }
    let sq = y.sqrt();
    1.0 + normal_cdf((z - h) / sq) - normal_cdf((z + h) / sq)
}

/// Point mass at zero of the absorbed height at offset `y`.
pub fn absorbed_height_atom(y: f64, h: f64) -> f64 {
    2.0 * normal_cdf(-h / y.sqrt())
}

/// Reflection-principle density of the height at offset `y` ignoring
/// absorption (both images added), for `z ≥ 0`.
pub fn pre_hit_density(y: f64, h: f64, z: f64) -> f64 {
    let norm = 1.0 / (2.0 * std::f64::consts::PI * y).sqrt();
    norm * (((z - h).powi(2) / (-2.0 * y)).exp() + ((z + h).powi(2) / (-2.0 * y)).exp())
}

/// Write estimator rows as CSV: `s,x,estimate,stderr,n,dy,H`.
pub fn write_estimator_csv(
    path: &std::path::Path,
    rows: &[PhiHatEstimate],
) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "s,x,estimate,stderr,n,dy,H")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.s, r.x, r.estimate, r.stderr, r.n_per_node, r.dy, r.h_max
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::{ks_statistic_one_sample_mixed, ks_statistic_two_sample};

    #[test]
    fn degenerate_anchor_absorbs_in_place() {
        let mut rng = stream(60, 0, 0);
        let p = simulate_reflected_bm(0.0, 0.0, 1e-3, &mut rng, 50.0);
        assert_eq!(p.left_zero, 0.0);
        assert_eq!(p.right_zero, 0.0);
        assert_eq!(p.right_values, vec![0.0]);
        assert!(!p.left_truncated && !p.right_truncated);
        assert_eq!(area(&p).value, 0.0);
    }

    #[test]
    fn anchor_value_is_exact_and_paths_nonnegative() {
        let mut rng = stream(61, 0, 0);
        for _ in 0..20 {
            let p = simulate_reflected_bm(0.5, 1.25, 2e-3, &mut rng, 100.0);
            assert_eq!(p.right_values[0], 1.25);
            assert_eq!(p.left_values[0], 1.25);
            assert!(p.right_values.iter().all(|&v| v >= 0.0));
            assert!(p.left_values.iter().all(|&v| v >= 0.0));
            if p.right_truncated {
                assert_eq!(p.right_zero, f64::INFINITY);
            } else {
                assert!(p.right_zero >= 0.5);
            }
            if p.left_truncated {
                assert_eq!(p.left_zero, f64::NEG_INFINITY);
            } else {
                assert!(p.left_zero <= 0.0);
            }
            assert!(area(&p).value > 0.0);
            assert!(area(&p).value.is_finite());
        }
    }

    #[test]
    fn right_zero_law_matches_hitting_time_cdf() {
        // From (0, 1) the right zero is the first passage of a Brownian
        // motion from 1, with CDF 2*Phi(-1/sqrt(y)); truncated directions
        // are exactly the first passages beyond the span budget and pile on
        // +inf against the matching censored mass.  Without the
        // bridge-crossing draw this ECDF sits visibly above the target.
        let mut rng = stream(62, 0, 0);
        let n = 4000;
        let span = 100.0;
        let samples: Vec<f64> = (0..n)
            .map(|_| simulate_reflected_bm(0.0, 1.0, 1e-3, &mut rng, span).right_zero)
            .collect();
        let cdf = |y: f64| {
            if y.is_infinite() {
                1.0
            } else {
                2.0 * normal_cdf(-1.0 / y.max(1e-300).sqrt())
            }
        };
        let pile = 1.0 - 2.0 * normal_cdf(-1.0 / span.sqrt());
        let atom = move |y: f64| if y == f64::INFINITY { pile } else { 0.0 };
        let d = ks_statistic_one_sample_mixed(&samples, cdf, atom);
        assert!(d < 0.03, "ks {d}");
    }

    #[test]
    fn area_ecdf_is_stable_under_grid_refinement() {
        let draw = |dy: f64, replica: u64| {
            let mut rng = stream(63, replica, 0);
            let n = 1500;
            (0..n)
                .map(|_| match sample_area(0.0, 1.0, dy, 30.0, 50.0, &mut rng) {
                    AreaOutcome::Complete { area } => area,
                    _ => f64::INFINITY,
                })
                .collect::<Vec<f64>>()
        };
        let coarse = draw(4e-3, 0);
        let fine = draw(2e-3, 1);
        let d = ks_statistic_two_sample(&coarse, &fine);
        assert!(d < 0.08, "ks {d}");
    }

    #[test]
    fn streamed_area_agrees_with_stored_path_distributionally() {
        // Same seed gives different draws (different consumption order), so
        // compare distributions instead: means within combined error.
        let mut rng = stream(64, 0, 0);
        let n = 1200;
        let stored: Vec<f64> = (0..n)
            .map(|_| {
                let p = simulate_reflected_bm(0.0, 0.75, 2e-3, &mut rng, 50.0);
                if p.left_truncated || p.right_truncated {
                    25.0
                } else {
                    area(&p).value.min(25.0)
                }
            })
            .collect();
        let mut rng = stream(64, 1, 0);
        let streamed: Vec<f64> = (0..n)
            .map(|_| match sample_area(0.0, 0.75, 2e-3, 25.0, 50.0, &mut rng) {
                AreaOutcome::Complete { area } => area,
                _ => 25.0,
            })
            .collect();
        let d = ks_statistic_two_sample(&stored, &streamed);
        assert!(d < 0.08, "ks {d}");
    }

    #[test]
    fn omega_hat_degenerate_and_bounds() {
        let mut rng = stream(65, 0, 0);
        let (est, err) = estimate_omega_hat(2.5, 0.0, 0.0, 1000, 1e-3, &mut rng);
        assert_eq!(est, 2.5);
        assert_eq!(err, 0.0);
        let (est, _) = estimate_omega_hat(1.0, 0.0, 1.0, 1000, 2e-3, &mut rng);
        assert!(est > 0.0 && est <= 1.0, "est {est}");
        // The damping ratio est/s strictly decreases in s on one ensemble.
        let areas = collect_areas(0.0, 0.5, 1000, 2e-3, 4600.0, 400.0, &mut rng);
        let ratios: Vec<f64> = [0.01, 0.1, 1.0]
            .iter()
            .map(|&s| omega_hat_from_areas(s, &areas).0 / s)
            .collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "{ratios:?}");
        assert!(ratios[0] < 1.0 && ratios[2] > 0.0);
    }

    #[test]
    fn capped_areas_contribute_zero_weight() {
        let areas = [1.0, f64::INFINITY, 2.0, f64::INFINITY];
        let (est, _) = omega_hat_from_areas(1.0, &areas);
        let want = ((-1.0f64).exp() + (-2.0f64).exp()) / 4.0;
        assert!((est - want).abs() < 1e-12);
    }

    #[test]
    fn reflection_density_oracle_at_origin() {
        // Height density at unit offset from height 0 evaluates to
        // sqrt(2/pi) at zero.
        let got = pre_hit_density(1.0, 0.0, 0.0);
        assert!((got - 0.7978845608).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn absorbed_cdf_atom_and_limits() {
        let atom = absorbed_height_atom(0.5, 1.0);
        assert!((atom - 0.15729920705028513).abs() < 1e-7);
        assert_eq!(absorbed_height_cdf(0.5, 1.0, -0.1), 0.0);
        let at_zero = absorbed_height_cdf(0.5, 1.0, 0.0);
        assert!((at_zero - atom).abs() < 1e-7);
        assert!((absorbed_height_cdf(0.5, 1.0, 50.0) - 1.0).abs() < 1e-9);
        // CDF is nondecreasing in z.
        let mut prev = 0.0;
        for i in 0..100 {
            let z = i as f64 * 0.05;
            let f = absorbed_height_cdf(0.5, 1.0, z);
            assert!(f >= prev - 1e-12);
            prev = f;
        }
    }

    #[test]
    fn phi_hat_is_symmetric_in_x() {
        let plus = estimate_phi_hat(&[1.0], 0.5, 250, 4e-3, |k| stream(66, k, 0));
        let minus = estimate_phi_hat(&[1.0], -0.5, 250, 4e-3, |k| stream(66, k, 1));
        let diff = (plus[0].estimate - minus[0].estimate).abs();
        let tol = 4.0 * (plus[0].stderr + minus[0].stderr);
        assert!(diff < tol.max(0.02), "diff {diff} tol {tol}");
        assert!(plus[0].estimate > 0.0);
        assert!(plus[0].h_max >= 2.0);
    }

    #[test]
    fn estimator_csv_has_documented_columns() {
        let rows = vec![PhiHatEstimate {
            s: 1.0,
            x: 0.5,
            estimate: 0.25,
            stderr: 0.01,
            h_max: 6.0,
            n_per_node: 100,
            dy: 1e-3,
        }];
        let dir = std::env::temp_dir().join("tsaw-estimator-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("phi.csv");
        write_estimator_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("s,x,estimate,stderr,n,dy,H\n"));
        assert!(text.contains("1,0.5,0.25,0.01,100,0.001,6"));
        std::fs::remove_dir_all(&dir).ok();
    }
}
