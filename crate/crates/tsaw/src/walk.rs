//! Event-driven simulation of the self-repelling walk.
//!
//! The walker holds at its current site while both neighbour hazards grow
//! with its own local time, then jumps left or right; holding times come
//! from exact inversion of the combined cumulative hazard (no thinning, so
//! unbounded rate functions are fine).  Runs stop either at a fixed clock
//! time or at an inverse local time — the first moment a chosen site has
//! accumulated a chosen amount of local time, with the final holding
//! interval cut exactly at the stopping level.  Post-processing turns a
//! trajectory into a stopped profile or into the per-edge gap path that the
//! site recursion models abstractly.

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::ray_knight::{ProfileFlags, ProfileRealization, Route};
use crate::rng::{exp1, unit};
use crate::weights::WeightModel;

/// Errors from walk drivers and trajectory post-processing.
#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    /// The event budget ran out before the stopping rule fired.
    #[error("event budget exhausted after {events} events")]
    BudgetExhausted { events: usize },
    /// The clock passed the time cap before the stopping rule fired.
    #[error("clock exceeded the time cap {cap}")]
    TimeCapped { cap: f64 },
    /// An edge path was requested for an edge the trajectory never touched.
    #[error("edge {edge} never touched by the trajectory")]
    EmptyEdgePath { edge: i64 },
}

/// Instantaneous state of the walk.
#[derive(Debug, Clone)]
pub struct WalkState {
    /// Current site.
    pub position: i64,
    /// Elapsed time.
    pub clock: f64,
    /// Time of the last jump (start of the current holding interval).
    pub arrival_clock: f64,
    /// Accumulated local time per visited site, current holding excluded.
    local: BTreeMap<i64, f64>,
}

impl WalkState {
    /// Fresh walk at the origin.
    pub fn new() -> Self {
        let mut local = BTreeMap::new();
        local.insert(0, 0.0);
        WalkState { position: 0, clock: 0.0, arrival_clock: 0.0, local }
    }

    /// Local time accumulated at `site` up to the current clock.
    pub fn local_time(&self, site: i64) -> f64 {
        let settled = self.local.get(&site).copied().unwrap_or(0.0);
        if site == self.position {
            settled + (self.clock - self.arrival_clock)
        } else {
            settled
        }
    }

    /// Visited sites with their local times at the current clock.
    pub fn local_times(&self) -> BTreeMap<i64, f64> {
        let mut map = self.local.clone();
        *map.entry(self.position).or_insert(0.0) += self.clock - self.arrival_clock;
        map
    }

    /// Apply one event: hold for `holding`, then jump by `direction`.
    fn apply(&mut self, holding: f64, direction: i8) {
        *self.local.entry(self.position).or_insert(0.0) += holding;
        self.clock += holding;
        self.arrival_clock = self.clock;
        self.position += direction as i64;
        self.local.entry(self.position).or_insert(0.0);
    }

    /// Advance the clock inside the current holding interval without jumping.
    fn settle(&mut self, duration: f64) {
        *self.local.entry(self.position).or_insert(0.0) += duration;
        self.clock += duration;
        self.arrival_clock = self.clock;
    }
}

impl Default for WalkState {
    fn default() -> Self {
        Self::new()
    }
}

/// One sampled event: how long the walker held and which way it jumped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkEvent {
    /// Holding time at the current site.
    pub holding: f64,
    /// Jump direction, `+1` or `-1`.
    pub direction: i8,
}

/// Deterministic core of the event sampler: the combined hazard
/// `w(u_plus + s) + w(u_minus + s)` is inverted at level `e_total`, and
/// `u_dir` in `[0,1)` picks the direction against the rate split at the
/// jump instant.
pub fn next_event_given(
    model: WeightModel,
    u_plus: f64,
    u_minus: f64,
    e_total: f64,
    u_dir: f64,
) -> WalkEvent {
    let holding = invert_total_hazard(model, u_plus, u_minus, e_total);
    let rate_plus = model.w(u_plus + holding);
    let rate_minus = model.w(u_minus + holding);
    let direction = if u_dir * (rate_plus + rate_minus) < rate_plus { 1 } else { -1 };
    WalkEvent { holding, direction }
}

/// Sample the next event from the gaps to the two neighbours.
pub fn next_event<R: Rng + ?Sized>(
    model: WeightModel,
    u_plus: f64,
    u_minus: f64,
    rng: &mut R,
) -> WalkEvent {
    next_event_given(model, u_plus, u_minus, exp1(rng), unit(rng))
}

/// Solve `∫_0^s [w(u_plus + v) + w(u_minus + v)] dv = e` in closed form.
fn invert_total_hazard(model: WeightModel, u_plus: f64, u_minus: f64, e: f64) -> f64 {
    match model {
        WeightModel::Exponential { beta } => {
            // The combined hazard integrates to
            // (e^{beta·u_plus} + e^{beta·u_minus})(e^{beta·s} - 1)/beta;
            // factoring out the larger exponent keeps the ratio finite, and
            // the log-space form survives arbitrarily negative gaps.
            let m = (beta * u_plus).max(beta * u_minus);
            let denom = (beta * u_plus - m).exp() + (beta * u_minus - m).exp();
            let log_x = (beta * e).ln() - m - denom.ln();
            if log_x > 30.0 {
                log_x / beta
            } else {
                log_x.exp().ln_1p() / beta
            }
        }
        WeightModel::Step { low, high } => {
            // Each gap contributes rate `low` until it reaches zero and
            // `high` afterwards: the combined hazard is piecewise linear
            // with breakpoints where each gap crosses zero.
            let mut remaining = e;
            let mut s = 0.0;
            let rate_of = |gap: f64| if gap >= 0.0 { high } else { low };
            loop {
                let g_plus = u_plus + s;
                let g_minus = u_minus + s;
                let rate = rate_of(g_plus) + rate_of(g_minus);
                // Distance until the combined rate next changes.
                let mut to_break = f64::INFINITY;
                if g_plus < 0.0 {
                    to_break = to_break.min(-g_plus);
                }
                if g_minus < 0.0 {
                    to_break = to_break.min(-g_minus);
                }
                if remaining <= rate * to_break {
                    return s + remaining / rate;
                }
                remaining -= rate * to_break;
                s += to_break;
            }
        }
    }
}

/// Bracket-and-bisect inversion of the combined hazard, kept as a reference
/// implementation for the closed forms.
pub fn invert_total_hazard_bisect(
    model: WeightModel,
    u_plus: f64,
    u_minus: f64,
    e: f64,
) -> f64 {
    // The combined hazard is at least each single hazard and at most twice
    // the larger one, which brackets the root between the single-hazard
    // inversions at levels e/2 and e.
    let single = |level: f64| {
        let s_plus = model.invert_hazard(u_plus, level) - u_plus;
        let s_minus = model.invert_hazard(u_minus, level) - u_minus;
        s_plus.min(s_minus)
    };
    let mut lo = single(e / 2.0);
    let mut hi = single(e);
    let total = |s: f64| {
        model.integrate_w(u_plus, u_plus + s).unwrap()
            + model.integrate_w(u_minus, u_minus + s).unwrap()
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < e {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// One recorded jump of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    /// Clock time of the jump.
    pub time: f64,
    /// Site the walker jumped to.
    pub new_position: i64,
}

/// A complete simulated trajectory: the jump record plus the final state.
#[derive(Debug, Clone)]
pub struct WalkTrajectory {
    /// Jumps in time order.
    pub events: Vec<JumpEvent>,
    /// State at the stopping time.
    pub final_state: WalkState,
}

impl WalkTrajectory {
    /// Iterate holding intervals as `(start, end, site)`, the final partial
    /// holding included.
    fn holdings(&self) -> impl Iterator<Item = (f64, f64, i64)> + '_ {
        let mut t = 0.0;
        let mut pos = 0i64;
        let closing = std::iter::once((self.final_state.clock, self.final_state.position));
        self.events
            .iter()
            .map(|e| (e.time, e.new_position))
            .chain(closing)
            .map(move |(time, new_position)| {
                let interval = (t, time, pos);
                t = time;
                pos = new_position;
                interval
            })
    }
}

/// Run until site `j` has accumulated local time `r`; returns the stopping
/// time and the trajectory, with the final holding cut exactly at the level.
pub fn run_until_inverse_local_time<R: Rng + ?Sized>(
    model: WeightModel,
    j: i64,
    r: f64,
    rng: &mut R,
    max_events: usize,
) -> Result<(f64, WalkTrajectory), WalkError> {
    run_until_inverse_local_time_capped(model, j, r, rng, max_events, f64::INFINITY)
}

/// [`run_until_inverse_local_time`] that also gives up as soon as the clock
/// would pass `t_cap`, detecting the event `{T > t_cap}` exactly.
pub fn run_until_inverse_local_time_capped<R: Rng + ?Sized>(
    model: WeightModel,
    j: i64,
    r: f64,
    rng: &mut R,
    max_events: usize,
    t_cap: f64,
) -> Result<(f64, WalkTrajectory), WalkError> {
    assert!(r > 0.0, "stopping level must be positive");
    let mut state = WalkState::new();
    let mut events = Vec::new();
    for _ in 0..max_events {
        let u_plus = state.local_time(state.position) - state.local_time(state.position + 1);
        let u_minus = state.local_time(state.position) - state.local_time(state.position - 1);
        let event = next_event(model, u_plus, u_minus, rng);
        if state.position == j {
            let need = r - state.local_time(j);
            if need <= event.holding {
                if state.clock + need > t_cap {
                    return Err(WalkError::TimeCapped { cap: t_cap });
                }
                // The level is reached inside this holding interval: cut
                // there and force the stored local time to exactly r.
                state.settle(need);
                state.local.insert(j, r);
                let t = state.clock;
                return Ok((t, WalkTrajectory { events, final_state: state }));
            }
        }
        // Otherwise the stop lies beyond this holding; a clock already past
        // the cap there certifies the censoring event exactly.
        if state.clock + event.holding > t_cap {
            return Err(WalkError::TimeCapped { cap: t_cap });
        }
        state.apply(event.holding, event.direction);
        events.push(JumpEvent { time: state.clock, new_position: state.position });
    }
    Err(WalkError::BudgetExhausted { events: max_events })
}

/// Run until clock time `t_end` and return the state there.
pub fn run_until_time<R: Rng + ?Sized>(
    model: WeightModel,
    t_end: f64,
    rng: &mut R,
    max_events: usize,
) -> Result<WalkState, WalkError> {
    assert!(t_end >= 0.0);
    let mut state = WalkState::new();
    for _ in 0..max_events {
        let u_plus = state.local_time(state.position) - state.local_time(state.position + 1);
        let u_minus = state.local_time(state.position) - state.local_time(state.position - 1);
        let event = next_event(model, u_plus, u_minus, rng);
        if state.clock + event.holding >= t_end {
            state.settle(t_end - state.clock);
            return Ok(state);
        }
        state.apply(event.holding, event.direction);
    }
    Err(WalkError::BudgetExhausted { events: max_events })
}

/// Profile of a trajectory stopped at the inverse local time of `(j, r)`,
/// tagged with the direct route.
pub fn local_time_profile(trajectory: &WalkTrajectory, j: i64, r: f64) -> ProfileRealization {
    let mut values = trajectory.final_state.local_times();
    let (&lo, _) = values.first_key_value().unwrap();
    let (&hi, _) = values.last_key_value().unwrap();
    // Pad with the zero just beyond each end so both routes share a shape.
    values.insert(lo - 1, 0.0);
    values.insert(hi + 1, 0.0);
    let left_end = *values.iter().find(|(_, &v)| v > 0.0).map(|(k, _)| k).unwrap();
    let right_end = *values.iter().rev().find(|(_, &v)| v > 0.0).map(|(k, _)| k).unwrap();
    ProfileRealization {
        origin: j,
        height: r,
        values,
        left_end,
        right_end,
        route: Route::Direct,
        flags: ProfileFlags::default(),
    }
}

/// One flip of the side indicator along an edge path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFlip {
    /// Edge-local time of the crossing.
    pub time: f64,
    /// Gap value at the crossing.
    pub xi: f64,
}

/// The gap process of one edge read off a trajectory in edge-local time.
#[derive(Debug, Clone)]
pub struct EdgeProcessPath {
    /// Edge index: the edge between sites `edge` and `edge + 1`.
    pub edge: i64,
    /// Side of the first touch: `-1` from the left endpoint, `+1` right.
    pub alpha0: i8,
    /// Gap at the first touch; always zero by construction.
    pub xi0: f64,
    /// Crossings of the edge in increasing edge-local time.
    pub flips: Vec<EdgeFlip>,
    /// Total edge-local time accumulated by the trajectory.
    pub duration: f64,
    /// Side indicator at the end of the duration.
    pub terminal_alpha: i8,
    /// Gap at the end of the duration.
    pub terminal_xi: f64,
    /// Active clock intervals as `(t_start, t_end, s_start)`: edge-local
    /// time runs as `s_start + (t - t_start)` inside each.
    pub segments: Vec<(f64, f64, f64)>,
}

impl EdgeProcessPath {
    /// Edge-local time accumulated by clock time `t`.
    pub fn tau_at(&self, t: f64) -> f64 {
        let mut s = 0.0;
        for &(t0, t1, s0) in &self.segments {
            if t < t0 {
                break;
            }
            s = s0 + (t.min(t1) - t0);
        }
        s
    }

    /// Clock time at which edge-local time `s` is first reached.
    pub fn theta_at(&self, s: f64) -> f64 {
        for &(t0, t1, s0) in &self.segments {
            if s <= s0 + (t1 - t0) {
                return t0 + (s - s0);
            }
        }
        self.segments.last().map_or(0.0, |&(_, t1, _)| t1)
    }

    /// Gap value at edge-local time `s`, linear between flips.
    pub fn xi_at(&self, s: f64) -> f64 {
        let mut alpha = self.alpha0 as f64;
        let (mut s0, mut xi) = (0.0, self.xi0);
        for flip in &self.flips {
            if s < flip.time {
                break;
            }
            xi = flip.xi;
            s0 = flip.time;
            alpha = -alpha;
        }
        // While the walker sits on the left endpoint the gap falls.
        xi + alpha * (s - s0)
    }
}

/// Read the gap process of edge `k` (between sites `k` and `k+1`) off a
/// trajectory: the gap is the right local time minus the left, watched only
/// while the walker occupies one of the edge's endpoints.
pub fn extract_edge_processes(
    trajectory: &WalkTrajectory,
    k: i64,
) -> Result<EdgeProcessPath, WalkError> {
    let mut s = 0.0;
    let mut xi = 0.0;
    let mut alpha: Option<i8> = None;
    let mut flips = Vec::new();
    let mut segments: Vec<(f64, f64, f64)> = Vec::new();
    let mut prev_site: Option<i64> = None;
    for (start, end, site) in trajectory.holdings() {
        let on_edge = site == k || site == k + 1;
        if on_edge {
            let side: i8 = if site == k { -1 } else { 1 };
            if alpha.is_none() {
                alpha = Some(side);
            } else if prev_site.is_some_and(|p| p != site && (p == k || p == k + 1)) {
                // The walker crossed the edge: the side flips with no gap
                // discontinuity.
                flips.push(EdgeFlip { time: s, xi });
            }
            let hold = end - start;
            // The occupied endpoint's local time grows, so the gap (right
            // minus left) moves at exactly the side indicator's rate.
            xi += side as f64 * hold;
            match segments.last_mut() {
                Some(last) if last.1 == start => last.1 = end,
                _ => segments.push((start, end, s)),
            }
            s += hold;
        }
        prev_site = Some(site);
    }
    let Some(alpha0) = alpha else {
        return Err(WalkError::EmptyEdgePath { edge: k });
    };
    let terminal_alpha = if flips.len() % 2 == 0 { alpha0 } else { -alpha0 };
    Ok(EdgeProcessPath {
        edge: k,
        alpha0,
        xi0: 0.0,
        flips,
        duration: s,
        terminal_alpha,
        terminal_xi: xi,
        segments,
    })
}

/// Write a trajectory as CSV: `event_index,time,position`.
pub fn write_trajectory_csv(
    path: &std::path::Path,
    trajectory: &WalkTrajectory,
) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "event_index,time,position")?;
    writeln!(out, "0,0,0")?;
    for (i, e) in trajectory.events.iter().enumerate() {
        writeln!(out, "{},{},{}", i + 1, e.time, e.new_position)?;
    }
    Ok(())
}
