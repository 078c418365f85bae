//! Gap processes observed along edge local time.
//!
//! For one edge, `xi` is the local-time difference across the edge and
//! `alpha` the side the walker currently occupies; `(alpha, xi)` is a
//! flip-drift Markov pair: `xi` moves at slope `alpha` and `alpha` flips at
//! rate `w(alpha * xi)`.  Watching `xi` only while `alpha = -1` (or its
//! negation while `alpha = +1`) gives the time-changed process `eta`: unit
//! downward drift, upward jumps at state-dependent rate `w(-u)`, jump targets
//! drawn from the kernel `Q` at the pre-jump state.  Its stationary law is the
//! gap law `rho`.  The profile recursion consumes `eta` evaluated at fixed
//! durations; the probes here quantify relaxation to `rho` and tail bounds.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::rng::exp1;
use crate::weights::{StationaryTables, WeightModel};

/// Equal weight of the two `alpha` signs in the stationary law of
/// `(alpha, xi)`: the product measure puts mass 1/2 on each sign times `rho`.
pub const ALPHA_HALF_WEIGHT: f64 = 0.5;

/// Errors from gap-process drivers.
#[derive(Debug, Error, PartialEq)]
pub enum EtaError {
    /// Hitting-time start on the wrong side of the barrier.
    #[error("invalid hitting start: y={y} incompatible with barrier={barrier} for {kind:?}")]
    InvalidStart { y: f64, barrier: f64, kind: HittingKind },
}

/// Initial condition for an `eta` line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaInit {
    /// Start exactly at zero.
    Delta0,
    /// Start from the jump-target kernel at zero, `Q(0, ·)`.
    Q0,
    /// Start at a fixed value.
    Value(f64),
}

impl EtaInit {
    /// Draw the initial value.
    pub fn resolve<R: Rng + ?Sized>(self, model: WeightModel, rng: &mut R) -> f64 {
        match self {
            EtaInit::Delta0 => 0.0,
            EtaInit::Q0 => model.sample_q(0.0, rng),
            EtaInit::Value(v) => v,
        }
    }
}

/// One jump of `eta`: elapsed time to the jump and the post-jump value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaStep {
    /// Elapsed time from the current value until the jump fires.
    pub jump_at: f64,
    /// Value immediately after the jump.
    pub new_value: f64,
}

/// Next jump of `eta` from value `u`, with both exponential levels injected —
/// the deterministic core used by tests with pinned draws.
pub fn eta_step_given(model: WeightModel, u: f64, e_jump: f64, e_target: f64) -> EtaStep {
    // Between jumps eta(s) = u - s, so the jump hazard at elapsed s is
    // w(s - u) and the cumulative hazard is ∫_{-u}^{s-u} w; inverting it at
    // level e_jump gives the jump time.
    let y = model.invert_hazard(-u, e_jump);
    let jump_at = u + y;
    // The pre-jump state is u - jump_at = -y; the jump lands on Q from there.
    let new_value = model.invert_hazard(-y, e_target);
    EtaStep { jump_at, new_value }
}

/// Next jump of `eta` from value `u`.
pub fn eta_step<R: Rng + ?Sized>(model: WeightModel, u: f64, rng: &mut R) -> EtaStep {
    eta_step_given(model, u, exp1(rng), exp1(rng))
}

/// Evolve an `eta` line for `duration` and return its terminal value.
///
/// The no-jump branch returns `init - duration` as one subtraction, so a line
/// started at exactly zero that never jumps returns exactly `-duration`; the
/// profile recursion relies on this to detect absorption without thresholds.
pub fn eta_evolve<R: Rng + ?Sized>(
    model: WeightModel,
    init: EtaInit,
    duration: f64,
    rng: &mut R,
) -> f64 {
    let mut value = init.resolve(model, rng);
    let mut remaining = duration;
    loop {
        let step = eta_step(model, value, rng);
        if step.jump_at > remaining {
            return value - remaining;
        }
        remaining -= step.jump_at;
        value = step.new_value;
    }
}

/// Evolve one gap line and record its value at each time in `times` (sorted
/// ascending).
///
/// All snapshots come from the same trajectory, so estimates at different
/// times are coupled — their sampling fluctuations largely cancel when
/// distances at successive times are compared.  Draw consumption matches
/// [`eta_evolve`] run to the last time exactly.
pub fn eta_evolve_snapshots<R: Rng + ?Sized>(
    model: WeightModel,
    init: EtaInit,
    times: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
    let Some(&last) = times.last() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(times.len());
    let mut value = init.resolve(model, rng);
    // Count down to the last time with the same subtraction chain as
    // `eta_evolve`, so the final snapshot is bitwise identical to it.
    let mut remaining = last;
    let mut next = 0usize;
    loop {
        let step = eta_step(model, value, rng);
        while next < times.len() && remaining - (last - times[next]) < step.jump_at {
            out.push(value - (remaining - (last - times[next])));
            next += 1;
        }
        if next == times.len() {
            return out;
        }
        remaining -= step.jump_at;
        value = step.new_value;
    }
}

/// One recorded flip of an `(alpha, xi)` path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flip {
    /// Edge-local time of the flip.
    pub time: f64,
    /// `xi` at the flip instant.
    pub xi: f64,
}

/// A simulated `(alpha, xi)` path over a fixed duration of edge-local time.
#[derive(Debug, Clone)]
pub struct AlphaXiPath {
    /// Initial side.
    pub alpha0: i8,
    /// Initial gap.
    pub xi0: f64,
    /// Total duration simulated.
    pub duration: f64,
    /// Flip instants in increasing time order.
    pub flips: Vec<Flip>,
    /// Side at the end of the duration.
    pub terminal_alpha: i8,
    /// Gap at the end of the duration.
    pub terminal_xi: f64,
}

impl AlphaXiPath {
    /// `xi` at time `t` in `[0, duration]`, linear between flips.
    pub fn xi_at(&self, t: f64) -> f64 {
        let mut alpha = self.alpha0 as f64;
        let (mut t0, mut xi) = (0.0, self.xi0);
        for flip in &self.flips {
            if t < flip.time {
                break;
            }
            xi = flip.xi;
            t0 = flip.time;
            alpha = -alpha;
        }
        xi + alpha * (t - t0)
    }
}

/// Simulate `(alpha, xi)` for `duration`: `xi` moves at slope `alpha`,
/// `alpha` flips at rate `w(alpha * xi)`.
pub fn alpha_xi_evolve<R: Rng + ?Sized>(
    model: WeightModel,
    alpha0: i8,
    xi0: f64,
    duration: f64,
    rng: &mut R,
) -> AlphaXiPath {
    debug_assert!(alpha0 == 1 || alpha0 == -1);
    let mut alpha = alpha0;
    let mut xi = xi0;
    let mut t = 0.0;
    let mut flips = Vec::new();
    loop {
        // Along the current stretch, w(alpha·xi(s)) = w(alpha·xi + s): the
        // signed gap always increases at unit rate toward the next flip.
        let start = alpha as f64 * xi;
        let hold = model.invert_hazard(start, exp1(rng)) - start;
        if t + hold > duration {
            let terminal_xi = xi + alpha as f64 * (duration - t);
            return AlphaXiPath {
                alpha0,
                xi0,
                duration,
                flips,
                terminal_alpha: alpha,
                terminal_xi,
            };
        }
        t += hold;
        xi += alpha as f64 * hold;
        flips.push(Flip { time: t, xi });
        alpha = -alpha;
    }
}

/// Which crossing of a barrier a hitting time records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HittingKind {
    /// First time `eta` is at or below the barrier (reached by drift).
    Below,
    /// First time `eta` is at or above the barrier (reached by a jump).
    Above,
}

/// A hitting-time draw, possibly censored at the time cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingSample {
    /// Barrier level.
    pub barrier: f64,
    /// Crossing direction.
    pub kind: HittingKind,
    /// Hitting time, or the cap if censored.
    pub time: f64,
    /// True when the cap expired before the crossing.
    pub censored: bool,
}

/// First time an `eta` line started at `y` crosses `barrier` in the given
/// direction, censored at `t_cap`.
pub fn hitting_time<R: Rng + ?Sized>(
    model: WeightModel,
    y: f64,
    barrier: f64,
    kind: HittingKind,
    t_cap: f64,
    rng: &mut R,
) -> Result<HittingSample, EtaError> {
    let sample = |time, censored| HittingSample { barrier, kind, time, censored };
    match kind {
        HittingKind::Below if y < barrier => Err(EtaError::InvalidStart { y, barrier, kind }),
        HittingKind::Above if y > barrier => Err(EtaError::InvalidStart { y, barrier, kind }),
        _ if y == barrier => Ok(sample(0.0, false)),
        HittingKind::Below => {
            let mut value = y;
            let mut t = 0.0;
            loop {
                let step = eta_step(model, value, rng);
                let to_barrier = value - barrier;
                if t + to_barrier.min(step.jump_at) > t_cap {
                    return Ok(sample(t_cap, true));
                }
                if step.jump_at >= to_barrier {
                    // Drift reaches the barrier before the jump fires.
                    return Ok(sample(t + to_barrier, false));
                }
                t += step.jump_at;
                value = step.new_value;
            }
        }
        HittingKind::Above => {
            let mut value = y;
            let mut t = 0.0;
            loop {
                let step = eta_step(model, value, rng);
                if t + step.jump_at > t_cap {
                    return Ok(sample(t_cap, true));
                }
                t += step.jump_at;
                if step.new_value >= barrier {
                    return Ok(sample(t, false));
                }
                value = step.new_value;
            }
        }
    }
}

/// Number of histogram bins used by the convergence probe.
const PROBE_BINS: usize = 200;

/// L1 histogram distance between a sample and the stationary law, on 200
/// fixed bins over the truncated stationary support.  Samples outside the
/// support count in full.
pub fn stationary_l1_distance(tables: &StationaryTables, values: &[f64]) -> f64 {
    let radius = tables.radius;
    let width = 2.0 * radius / PROBE_BINS as f64;
    let mut counts = vec![0usize; PROBE_BINS];
    let mut outside = 0usize;
    for &v in values {
        let idx = ((v + radius) / width).floor();
        if idx < 0.0 || idx >= PROBE_BINS as f64 {
            outside += 1;
        } else {
            counts[idx as usize] += 1;
        }
    }
    let n = values.len() as f64;
    let mut distance = outside as f64 / n;
    for (i, &c) in counts.iter().enumerate() {
        let lo = -radius + i as f64 * width;
        let mass = tables.cdf_at(lo + width) - tables.cdf_at(lo);
        distance += (c as f64 / n - mass).abs();
    }
    distance
}

/// [`stationary_l1_distance`] of the law of `eta(t)` estimated from `n`
/// fresh replicas.
pub fn convergence_probe<R: Rng + ?Sized>(
    tables: &StationaryTables,
    init: EtaInit,
    t: f64,
    n: usize,
    rng: &mut R,
) -> f64 {
    let model = tables.model();
    let values: Vec<f64> = (0..n).map(|_| eta_evolve(model, init, t, rng)).collect();
    stationary_l1_distance(tables, &values)
}

/// One exceedance estimate from [`tail_probe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeRow {
    /// Evolution time.
    pub t: f64,
    /// Exceedance level.
    pub x: f64,
    /// Estimated `P(eta(t) > x)`.
    pub estimate: f64,
    /// Binomial standard error of the estimate.
    pub stderr: f64,
    /// Replica count behind the estimate.
    pub n: usize,
}

/// Estimate exceedance probabilities `P(eta(t) > x)` over a `(t, x)` grid;
/// one replica batch per `t`, shared across the `x` levels.
pub fn tail_probe<R: Rng + ?Sized>(
    model: WeightModel,
    init: EtaInit,
    t_grid: &[f64],
    x_grid: &[f64],
    n: usize,
    rng: &mut R,
) -> Vec<ProbeRow> {
    let mut rows = Vec::with_capacity(t_grid.len() * x_grid.len());
    for &t in t_grid {
        let values: Vec<f64> = (0..n).map(|_| eta_evolve(model, init, t, rng)).collect();
        for &x in x_grid {
            let hits = values.iter().filter(|&&v| v > x).count();
            let p = hits as f64 / n as f64;
            rows.push(ProbeRow {
                t,
                x,
                estimate: p,
                stderr: (p * (1.0 - p) / n as f64).sqrt(),
                n,
            });
        }
    }
    rows
}

/// Write probe rows as CSV: `t,x,estimate,stderr,n`.
pub fn write_probe_csv(path: &std::path::Path, rows: &[ProbeRow]) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "t,x,estimate,stderr,n")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.t, r.x, r.estimate, r.stderr, r.n)?;
    }
    Ok(())
}
