//! Jump-rate weight functions and the stationary gap law they induce.
//!
//! A weight `w` is a positive, non-decreasing, non-constant function of the
//! local-time gap between neighbouring sites.  Everything downstream is driven
//! by three pieces of calculus on `w`: evaluation, integration over gap
//! intervals (cumulative hazards), and inversion of those hazards to sample
//! event times exactly.  The induced repulsion potential
//! `V(u) = ∫_0^u (w(v) - w(-v)) dv` is even, convex and non-negative, and
//! `rho(du) = Z^{-1} e^{-V(u)} du` is the stationary law of the gap processes;
//! [`StationaryTables`] precomputes its normalizer, variance and quantile grid.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::exp1;

/// Errors from weight-model construction and interval calculus.
#[derive(Debug, Error, PartialEq)]
pub enum WeightError {
    /// Integration interval with `a > b`.
    #[error("invalid interval: a={a} exceeds b={b}")]
    InvalidInterval { a: f64, b: f64 },
    /// Parameters that violate positivity or strict monotonicity.
    #[error("invalid weight parameters: {0}")]
    InvalidParameter(String),
}

/// Relative mass below which `e^{-V}` tails are truncated in quadrature.
const TAIL_EPSILON: f64 = 1e-14;

/// Absolute tolerance for bracketed hazard inversion.
const INVERT_TOL: f64 = 1e-12;

/// A jump-rate weight function of the local-time gap.
///
/// Serialized form matches the experiment config schema:
/// `{"kind": "exponential", "beta": 1.0}` or
/// `{"kind": "step", "low": 1.0, "high": 2.0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightModel {
    /// `w(u) = exp(beta * u)`, `beta > 0`.
    Exponential { beta: f64 },
    /// Two-level step: `low` on `u < 0`, `high` on `u >= 0` (right-continuous),
    /// with `0 < low < high`.
    Step { low: f64, high: f64 },
}

impl WeightModel {
    /// Exponential weight `w(u) = e^{beta u}`.
    pub fn exponential(beta: f64) -> Result<Self, WeightError> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(WeightError::InvalidParameter(format!(
                "beta must be finite and positive, got {beta}"
            )));
        }
        Ok(WeightModel::Exponential { beta })
    }

    /// Two-level step weight, `low` below zero and `high` at and above zero.
    pub fn step(low: f64, high: f64) -> Result<Self, WeightError> {
        if !(low.is_finite() && high.is_finite() && low > 0.0 && low < high) {
            return Err(WeightError::InvalidParameter(format!(
                "step levels must satisfy 0 < low < high, got low={low} high={high}"
            )));
        }
        Ok(WeightModel::Step { low, high })
    }

    /// Validate parameters of a deserialized model.
    pub fn validate(&self) -> Result<(), WeightError> {
        match *self {
            WeightModel::Exponential { beta } => Self::exponential(beta).map(|_| ()),
            WeightModel::Step { low, high } => Self::step(low, high).map(|_| ()),
        }
    }

    /// Evaluate `w(u)`.
    pub fn w(&self, u: f64) -> f64 {
        match *self {
            WeightModel::Exponential { beta } => (beta * u).exp(),
            WeightModel::Step { low, high } => {
                if u < 0.0 {
                    low
                } else {
                    high
                }
            }
        }
    }

    /// Exact `∫_a^b w(v) dv` for `a <= b`.
    pub fn integrate_w(&self, a: f64, b: f64) -> Result<f64, WeightError> {
        if a > b {
            return Err(WeightError::InvalidInterval { a, b });
        }
        Ok(match *self {
            WeightModel::Exponential { beta } => {
                // (e^{bβ} - e^{aβ})/β, factored to avoid cancellation for b near a.
                let eb = (beta * a).exp();
                eb * (beta * (b - a)).exp_m1() / beta
            }
            WeightModel::Step { low, high } => {
                let below = (b.min(0.0) - a.min(0.0)) * low;
                let above = (b.max(0.0) - a.max(0.0)) * high;
                below + above
            }
        })
    }

    /// The unique `y >= x` with `∫_x^y w = e`, for `e >= 0`.
    pub fn invert_hazard(&self, x: f64, e: f64) -> f64 {
        debug_assert!(e >= 0.0, "cumulative hazard must be non-negative");
        match *self {
            WeightModel::Exponential { beta } => {
                // e^{βy} = e^{βx} + βe, solved in log space for stability.
                let a = beta * x;
                let b = (beta * e).ln();
                let m = a.max(b);
                if m == f64::NEG_INFINITY {
                    return x; // e == 0 with arbitrarily negative x
                }
                (m + ((a - m).exp() + (b - m).exp()).ln()) / beta
            }
            WeightModel::Step { low, high } => {
                if x >= 0.0 {
                    x + e / high
                } else {
                    let capacity = -x * low;
                    if e <= capacity {
                        x + e / low
                    } else {
                        (e - capacity) / high
                    }
                }
            }
        }
    }

    /// Hazard inversion by bracketing and bisection, independent of the
    /// closed forms; kept public as a cross-check oracle.
    pub fn invert_hazard_bisect(&self, x: f64, e: f64) -> f64 {
        if e <= 0.0 {
            return x;
        }
        // Double the bracket until the cumulative hazard exceeds e.
        let mut width = (e / self.w(x)).max(1e-12);
        while self.integrate_w(x, x + width).expect("ordered interval") < e {
            width *= 2.0;
        }
        let (mut lo, mut hi) = (x, x + width);
        while hi - lo > INVERT_TOL {
            let mid = 0.5 * (lo + hi);
            if self.integrate_w(x, mid).expect("ordered interval") < e {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Repulsion potential `V(u) = ∫_0^u (w(v) - w(-v)) dv`: even, convex,
    /// non-negative, `V(0) = 0`.
    pub fn potential(&self, u: f64) -> f64 {
        match *self {
            WeightModel::Exponential { beta } => {
                // (e^{βu} + e^{-βu} - 2)/β; expm1 keeps precision near zero.
                let t = beta * u.abs();
                (t.exp_m1() + (-t).exp_m1()) / beta
            }
            WeightModel::Step { low, high } => (high - low) * u.abs(),
        }
    }

    /// Radius `u*` beyond which `e^{-V(u)} < TAIL_EPSILON`; quadratures and
    /// histogram supports truncate there.
    pub fn truncation_radius(&self) -> f64 {
        let level = -TAIL_EPSILON.ln();
        match *self {
            WeightModel::Exponential { beta } => {
                // V(u) = level  <=>  cosh(βu) = 1 + β·level/2
                (1.0 + 0.5 * beta * level).acosh() / beta
            }
            WeightModel::Step { low, high } => level / (high - low),
        }
    }

    /// Normalizer `Z = ∫ e^{-V}` of the stationary gap law.
    pub fn normalizing_constant(&self) -> f64 {
        2.0 * adaptive_simpson(|u| (-self.potential(u)).exp(), 0.0, self.truncation_radius(), 1e-12)
    }

    /// Variance `∫ u^2 rho(du)` of the stationary gap law (its mean is zero).
    pub fn stationary_variance(&self) -> f64 {
        // Extend the radius until the u^2-weighted tail is negligible too.
        let mut radius = self.truncation_radius();
        while radius * radius * (-self.potential(radius)).exp() > 1e-16 {
            radius *= 1.25;
        }
        let weighted =
            2.0 * adaptive_simpson(|u| u * u * (-self.potential(u)).exp(), 0.0, radius, 1e-12);
        weighted / self.normalizing_constant()
    }

    /// Draw from the jump-target kernel `Q(x, dy) = e^{-∫_x^y w} w(y) dy` on
    /// `y >= x` by inverting the cumulative hazard at an Exp(1) level.
    pub fn sample_q<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        self.invert_hazard(x, exp1(rng))
    }
}

/// Precomputed stationary-law tables: normalizer, variance, and a uniform
/// 4096-node CDF grid over the truncated support for quantile sampling.
#[derive(Debug, Clone)]
pub struct StationaryTables {
    model: WeightModel,
    /// Normalizer `Z`.
    pub z: f64,
    /// Variance of the stationary gap law.
    pub variance: f64,
    /// Support radius: the grid spans `[-radius, radius]`.
    pub radius: f64,
    nodes: Vec<f64>,
    cdf: Vec<f64>,
}

/// Number of CDF grid nodes.
const GRID_NODES: usize = 4096;

impl StationaryTables {
    /// Build tables for a model.  Cell masses are computed on the right half
    /// and mirrored so the grid is exactly symmetric.
    pub fn build(model: WeightModel) -> Self {
        let radius = model.truncation_radius();
        let n = GRID_NODES;
        let h = 2.0 * radius / (n as f64 - 1.0);
        let nodes: Vec<f64> = (0..n).map(|i| -radius + i as f64 * h).collect();

        let density = |u: f64| (-model.potential(u)).exp();
        let mut cells = vec![0.0f64; n - 1];
        let mid = (n - 1) / 2; // central cell, symmetric around zero
        for i in mid..n - 1 {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let m = 0.5 * (a + b);
            cells[i] = (density(a) + 4.0 * density(m) + density(b)) * (b - a) / 6.0;
            cells[n - 2 - i] = cells[i];
        }

        let mut cdf = vec![0.0f64; n];
        for i in 0..n - 1 {
            cdf[i + 1] = cdf[i] + cells[i];
        }
        let total = cdf[n - 1];
        for v in cdf.iter_mut() {
            *v /= total;
        }

        StationaryTables {
            model,
            z: model.normalizing_constant(),
            variance: model.stationary_variance(),
            radius,
            nodes,
            cdf,
        }
    }

    /// The model these tables were built for.
    pub fn model(&self) -> WeightModel {
        self.model
    }

    /// CDF of the stationary law at `u`, linearly interpolated on the grid.
    pub fn cdf_at(&self, u: f64) -> f64 {
        if u <= self.nodes[0] {
            return 0.0;
        }
        if u >= self.nodes[self.nodes.len() - 1] {
            return 1.0;
        }
        let idx = match self.nodes.binary_search_by(|x| x.partial_cmp(&u).unwrap()) {
            Ok(i) => return self.cdf[i],
            Err(i) => i - 1,
        };
        let t = (u - self.nodes[idx]) / (self.nodes[idx + 1] - self.nodes[idx]);
        self.cdf[idx] + t * (self.cdf[idx + 1] - self.cdf[idx])
    }

    /// Quantile function: the `p`-level of the grid CDF, linearly interpolated.
    pub fn quantile(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        // First index with cdf >= p.
        let idx = self.cdf.partition_point(|&c| c < p);
        if idx == 0 {
            return self.nodes[0];
        }
        let (c0, c1) = (self.cdf[idx - 1], self.cdf[idx]);
        if c1 == c0 {
            return self.nodes[idx];
        }
        let t = (p - c0) / (c1 - c0);
        self.nodes[idx - 1] + t * (self.nodes[idx] - self.nodes[idx - 1])
    }

    /// Draw from the stationary gap law by inverse-CDF sampling.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(crate::rng::unit(rng))
    }
}

/// Adaptive Simpson quadrature with absolute tolerance.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (fa + 4.0 * fm + fb) * (b - a) / 6.0
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(&f, a, fa, b, fb, fm, whole, tol, 40)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn exp1_model() -> WeightModel {
        WeightModel::exponential(1.0).unwrap()
    }

    fn step12() -> WeightModel {
        WeightModel::step(1.0, 2.0).unwrap()
    }

    #[test]
    fn constructors_reject_bad_parameters() {
        assert!(WeightModel::exponential(0.0).is_err());
        assert!(WeightModel::exponential(-1.0).is_err());
        assert!(WeightModel::exponential(f64::NAN).is_err());
        assert!(WeightModel::step(0.0, 1.0).is_err());
        assert!(WeightModel::step(2.0, 2.0).is_err());
        assert!(WeightModel::step(2.0, 1.0).is_err());
    }

    #[test]
    fn evaluate_matches_closed_forms() {
        assert!((exp1_model().w(0.5) - 0.5f64.exp()).abs() < 1e-15);
        assert_eq!(step12().w(-0.3), 1.0);
        // Right-continuity: the high level is taken at zero.
        assert_eq!(step12().w(0.0), 2.0);
        assert_eq!(step12().w(0.7), 2.0);
    }

    #[test]
    fn model_is_positive_nondecreasing_nonconstant() {
        for model in [exp1_model(), step12(), WeightModel::exponential(2.5).unwrap()] {
            let mut prev = f64::NEG_INFINITY;
            for i in -100..=100 {
                let u = i as f64 * 0.1;
                let v = model.w(u);
                assert!(v > 0.0);
                assert!(v >= prev);
                prev = v;
            }
            assert!(model.w(10.0) > model.w(-10.0));
        }
    }

    #[test]
    fn integrate_rejects_reversed_interval() {
        assert_eq!(
            step12().integrate_w(1.0, 0.0),
            Err(WeightError::InvalidInterval { a: 1.0, b: 0.0 })
        );
    }

    #[test]
    fn integrate_closed_forms() {
        // ∫_0^1 e^u du = e - 1
        let got = exp1_model().integrate_w(0.0, 1.0).unwrap();
        assert!((got - 1.0f64.exp_m1()).abs() < 1e-14);
        // Step crossing zero: 1·1 + 2·1
        let got = step12().integrate_w(-1.0, 1.0).unwrap();
        assert!((got - 3.0).abs() < 1e-14);
        // Degenerate interval integrates to zero.
        assert_eq!(step12().integrate_w(0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn invert_hazard_examples() {
        // Exponential: ∫_0^1 e^u = e - 1 pulls back to y = 1.
        let y = exp1_model().invert_hazard(0.0, 1.0f64.exp_m1());
        assert!((y - 1.0).abs() < 1e-10);
        // Step from -1 with e = 3 crosses the kink: 1 below zero, 2·1 above.
        let y = step12().invert_hazard(-1.0, 3.0);
        assert!((y - 1.0).abs() < 1e-12);
        // Budget exhausted exactly at the kink.
        let y = step12().invert_hazard(-1.0, 1.0);
        assert!((y - 0.0).abs() < 1e-12);
    }

    #[test]
    fn invert_hazard_agrees_with_bisection() {
        let models = [exp1_model(), step12(), WeightModel::exponential(2.0).unwrap()];
        for model in models {
            for &x in &[-3.0, -0.5, 0.0, 0.25, 2.0] {
                for &e in &[1e-6, 0.1, 1.0, 7.5] {
                    let fast = model.invert_hazard(x, e);
                    let slow = model.invert_hazard_bisect(x, e);
                    assert!(
                        (fast - slow).abs() < 1e-9,
                        "{model:?} x={x} e={e}: {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn invert_round_trips_through_integrate() {
        for model in [exp1_model(), step12()] {
            for &x in &[-2.0, -0.1, 0.0, 1.3] {
                for &y in &[0.0, 0.4, 2.7] {
                    let y = x + y;
                    let e = model.integrate_w(x, y).unwrap();
                    let back = model.invert_hazard(x, e);
                    assert!((back - y).abs() < 1e-10, "{model:?} x={x} y={y} -> {back}");
                }
            }
        }
    }

    #[test]
    fn potential_closed_forms() {
        // Exponential beta=1 at u=2: 2 cosh(2) - 2.
        let want = 2.0 * 2.0f64.cosh() - 2.0;
        assert!((exp1_model().potential(2.0) - want).abs() < 1e-12);
        assert!((exp1_model().potential(2.0) - 5.524391382167263).abs() < 1e-6);
        // Step(1,2): V(u) = |u|.
        for i in -20..=20 {
            let u = i as f64 * 0.25;
            assert!((step12().potential(u) - u.abs()).abs() < 1e-13);
        }
    }

    #[test]
    fn potential_is_even_nonnegative_convex() {
        for model in [exp1_model(), step12(), WeightModel::exponential(0.5).unwrap()] {
            assert_eq!(model.potential(0.0), 0.0);
            let h = 0.05;
            for i in 0..=200 {
                let u = -5.0 + i as f64 * h;
                let v = model.potential(u);
                assert!(v >= 0.0);
                assert!((v - model.potential(-u)).abs() < 1e-11);
                // Discrete convexity on the grid.
                let second = model.potential(u - h) - 2.0 * v + model.potential(u + h);
                assert!(second > -1e-9, "{model:?} at {u}: {second}");
            }
        }
    }

    #[test]
    fn potential_matches_quadrature_of_definition() {
        // Independent route: integrate w(v) - w(-v) numerically.
        for model in [exp1_model(), step12()] {
            for &u in &[0.3, 1.0, 2.2] {
                let direct = adaptive_simpson(|v| model.w(v) - model.w(-v), 0.0, u, 1e-13);
                assert!((model.potential(u) - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn normalizer_step_is_two() {
        // V(u) = |u| gives the standard two-sided exponential: Z = 2.
        assert!((step12().normalizing_constant() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn normalizer_exponential_matches_oracle() {
        // Frozen from the independent high-accuracy oracle (Bessel closed form
        // 2 e^2 K_0(2), confirmed by direct quadrature).
        assert!((exp1_model().normalizing_constant() - 1.6831364301415428).abs() < 1e-6);
        let beta2 = WeightModel::exponential(2.0).unwrap();
        assert!((beta2.normalizing_constant() - 1.144463079806895).abs() < 1e-6);
    }

    #[test]
    fn variance_matches_oracles() {
        // Two-sided exponential has variance 2.
        assert!((step12().stationary_variance() - 2.0).abs() < 1e-9);
        // Frozen oracle values for the exponential weights.
        assert!((exp1_model().stationary_variance() - 0.4146105457539517).abs() < 1e-6);
        let beta2 = WeightModel::exponential(2.0).unwrap();
        assert!((beta2.stationary_variance() - 0.18277504530279236).abs() < 1e-6);
    }

    #[test]
    fn tables_quantiles_match_closed_form() {
        let tables = StationaryTables::build(step12());
        // Median of a symmetric law.
        assert!(tables.quantile(0.5).abs() < 1e-9);
        // 1 - e^{-x}/2 = 0.9  =>  x = ln 5.
        assert!((tables.quantile(0.9) - 5.0f64.ln()).abs() < 1e-3);
        assert!((tables.quantile(0.1) + 5.0f64.ln()).abs() < 1e-3);
    }

    #[test]
    fn tables_cdf_is_symmetric_and_monotone() {
        for model in [step12(), exp1_model()] {
            let tables = StationaryTables::build(model);
            let mut prev = -0.1;
            for i in 0..=100 {
                let u = -tables.radius + i as f64 * tables.radius / 50.0;
                let c = tables.cdf_at(u);
                assert!(c >= prev);
                assert!((c - (1.0 - tables.cdf_at(-u))).abs() < 1e-9);
                prev = c;
            }
        }
    }

    #[test]
    fn sample_q_matches_target_cdf() {
        // Q(x, dy) has CDF 1 - e^{-∫_x^y w}; invert at uniform levels and
        // compare a sampled batch against it with a coarse sup-gap bound.
        let model = step12();
        let x = -0.5;
        let mut rng = stream(11, 0, 0);
        let mut draws: Vec<f64> = (0..20000).map(|_| model.sample_q(x, &mut rng)).collect();
        draws.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let cdf = |y: f64| 1.0 - (-model.integrate_w(x, y).unwrap()).exp();
        let n = draws.len() as f64;
        let mut sup: f64 = 0.0;
        for (i, &y) in draws.iter().enumerate() {
            let f = cdf(y);
            sup = sup.max((f - i as f64 / n).abs()).max((f - (i + 1) as f64 / n).abs());
        }
        assert!(sup < 0.015, "sup-gap {sup}");
        assert!(draws.iter().all(|&y| y >= x));
    }

    #[test]
    fn worked_q_example_by_hand() {
        // From x = -0.5 at level 1: capacity 0.5 below zero, remainder 0.5 at
        // rate 2 lands at 0.25.
        assert!((step12().invert_hazard(-0.5, 1.0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn serde_round_trip_matches_schema() {
        let m: WeightModel = serde_json::from_str(r#"{"kind":"exponential","beta":1.0}"#).unwrap();
        assert_eq!(m, WeightModel::Exponential { beta: 1.0 });
        let m: WeightModel = serde_json::from_str(r#"{"kind":"step","low":1.0,"high":2.0}"#).unwrap();
        assert_eq!(m, WeightModel::Step { low: 1.0, high: 2.0 });
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"kind":"step","low":1.0,"high":2.0}"#);
    }
}
