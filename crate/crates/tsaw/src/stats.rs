//! Statistical verdicts for the experiment harness.
//!
//! Everything here is deliberately small and exact about its conventions:
//! Kolmogorov–Smirnov statistics evaluated with full tie handling (atoms and
//! infinite censored values are legal inputs), the asymptotic Kolmogorov
//! tail with the Stephens finite-sample correction, histogram masses for L1
//! comparisons, a log-linear tail fit, and a normal CDF good to a few times
//! 1e-8 — enough margin for tests whose tolerances sit at the percent level.

use thiserror::Error;

/// Errors from statistical routines.
#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    /// Too few samples for a calibrated p-value.
    #[error("undersized sample: {n} < {min}")]
    Undersized { n: usize, min: usize },
    /// Tail fit needs positive survival estimates and enough points.
    #[error("invalid tail data: {reason}")]
    InvalidTail { reason: String },
}

/// Minimum per-sample size for calibrated Kolmogorov–Smirnov p-values.
pub const KS_MIN_SAMPLES: usize = 50;

/// Standard normal CDF, absolute error below 1e-7.
pub fn normal_cdf(z: f64) -> f64 {
    if z < -8.0 {
        return 0.0;
    }
    if z > 8.0 {
        return 1.0;
    }
    // Rational tail expansion applied to the positive side.
    let x = z.abs();
    let t = 1.0 / (1.0 + 0.2316419 * x);
    let poly = t
        * (0.319381530
            + t * (-0.356563782 + t * (1.781477937 + t * (-1.821255978 + t * 1.330274429))));
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let upper = density * poly;
    if z >= 0.0 { 1.0 - upper } else { upper }
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.755 {
        // Complement via the fast-converging theta series for small x.
        let factor = (2.0 * std::f64::consts::PI).sqrt() / x;
        let mut sum = 0.0;
        for k in 1..=10 {
            let a = (2 * k - 1) as f64 * std::f64::consts::PI / (2.0 * x);
            sum += (-0.5 * a * a).exp();
        }
        1.0 - factor * sum
    } else {
        let mut sum = 0.0;
        for k in 1..=100 {
            let term = (-2.0 * (k as f64) * (k as f64) * x * x).exp();
            sum += if k % 2 == 1 { term } else { -term };
            if term < 1e-16 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Result of a Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// Supremum distance between the distribution functions.
    pub statistic: f64,
    /// Asymptotic p-value with the Stephens finite-sample correction.
    pub p_value: f64,
    /// Effective sample size behind the p-value.
    pub effective_n: f64,
}

fn sort_checked(samples: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = samples.to_vec();
    assert!(v.iter().all(|x| !x.is_nan()), "NaN sample");
    v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Supremum distance between the ECDF of `samples` and a reference
/// distribution with atoms.
///
/// `cdf` is the right-continuous distribution function and `atom` the point
/// mass at each location (zero wherever the reference is continuous); the
/// left limit `cdf(x) - atom(x)` is compared against the ECDF's left limit,
/// so shared atoms — a point mass at zero, a censoring pile at infinity —
/// do not inflate the distance.  A sample at `+inf` compares against total
/// mass one with `atom(inf)` read from the callback.
pub fn ks_statistic_one_sample_mixed(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    atom: impl Fn(f64) -> f64,
) -> f64 {
    let sorted = sort_checked(samples);
    let n = sorted.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0usize;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = if x.is_infinite() { 1.0 } else { cdf(x) };
        sup = sup.max((f - atom(x) - i as f64 / n).abs());
        sup = sup.max((f - j as f64 / n).abs());
        i = j;
    }
    sup
}

/// Supremum distance between the ECDF of `samples` and a continuous
/// reference CDF.
pub fn ks_statistic_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    ks_statistic_one_sample_mixed(samples, cdf, |_| 0.0)
}

fn stephens_p(statistic: f64, n: f64) -> f64 {
    let scale = n.sqrt() + 0.12 + 0.11 / n.sqrt();
    kolmogorov_sf(scale * statistic)
}

/// One-sample Kolmogorov–Smirnov test against a continuous reference CDF.
pub fn ks_one_sample(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
) -> Result<KsResult, StatsError> {
    ks_one_sample_mixed(samples, cdf, |_| 0.0)
}

/// One-sample Kolmogorov–Smirnov test against a reference with atoms; the
/// p-value is conservative when the atoms carry real mass.
pub fn ks_one_sample_mixed(
    samples: &[f64],
    cdf: impl Fn(f64) -> f64,
    atom: impl Fn(f64) -> f64,
) -> Result<KsResult, StatsError> {
    if samples.len() < KS_MIN_SAMPLES {
        return Err(StatsError::Undersized { n: samples.len(), min: KS_MIN_SAMPLES });
    }
    let statistic = ks_statistic_one_sample_mixed(samples, cdf, atom);
    let n = samples.len() as f64;
    Ok(KsResult { statistic, p_value: stephens_p(statistic, n), effective_n: n })
}

/// Supremum distance between the ECDFs of two samples, ties and infinities
/// included.
pub fn ks_statistic_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let sa = sort_checked(a);
    let sb = sort_checked(b);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let mut sup: f64 = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    while i < sa.len() || j < sb.len() {
        let x = match (sa.get(i), sb.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => break,
        };
        while i < sa.len() && sa[i] == x {
            i += 1;
        }
        while j < sb.len() && sb[j] == x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Two-sample Kolmogorov–Smirnov test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult, StatsError> {
    let min = a.len().min(b.len());
    if min < KS_MIN_SAMPLES {
        return Err(StatsError::Undersized { n: min, min: KS_MIN_SAMPLES });
    }
    let statistic = ks_statistic_two_sample(a, b);
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    Ok(KsResult { statistic, p_value: stephens_p(statistic, ne), effective_n: ne })
}

/// Fraction of samples per bin for the given edges, plus the fraction
/// falling outside `[edges[0], edges[last])`.
pub fn histogram_masses(samples: &[f64], edges: &[f64]) -> (Vec<f64>, f64) {
    assert!(edges.len() >= 2 && edges.windows(2).all(|w| w[0] < w[1]));
    let n = samples.len() as f64;
    let mut counts = vec![0usize; edges.len() - 1];
    let mut outside = 0usize;
    for &x in samples {
        assert!(!x.is_nan());
        if x < edges[0] || x >= edges[edges.len() - 1] {
            outside += 1;
            continue;
        }
        // partition_point gives the first edge strictly greater than x.
        let idx = edges.partition_point(|&e| e <= x) - 1;
        counts[idx.min(edges.len() - 2)] += 1;
    }
    (counts.iter().map(|&c| c as f64 / n).collect(), outside as f64 / n)
}

/// L1 distance between a sample histogram and reference bin masses, counting
/// out-of-range sample mass and unassigned reference mass in full.
pub fn l1_histogram_distance(samples: &[f64], edges: &[f64], reference: &[f64]) -> f64 {
    assert_eq!(reference.len(), edges.len() - 1);
    let (masses, outside) = histogram_masses(samples, edges);
    let in_ref: f64 = reference.iter().sum();
    masses.iter().zip(reference).map(|(p, q)| (p - q).abs()).sum::<f64>()
        + outside
        + (1.0 - in_ref).max(0.0)
}

/// A fitted exponential tail `p ≈ exp(intercept - gamma * x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTailFit {
    /// Decay rate (positive for a decaying tail).
    pub gamma: f64,
    /// Intercept of the log-linear fit.
    pub intercept: f64,
    /// Coefficient of determination of the fit in log space.
    pub r_squared: f64,
}

/// Least-squares fit of `ln p` against `x` for exponential tail decay.
pub fn fit_exp_tail(points: &[(f64, f64)]) -> Result<ExpTailFit, StatsError> {
    if points.len() < 3 {
        return Err(StatsError::InvalidTail { reason: format!("{} points", points.len()) });
    }
    if let Some(&(x, p)) = points.iter().find(|&&(_, p)| p <= 0.0) {
        return Err(StatsError::InvalidTail {
            reason: format!("nonpositive survival {p} at x={x}"),
        });
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(x, _)| x).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, p)| p.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(StatsError::InvalidTail { reason: "degenerate x grid".into() });
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(ExpTailFit { gamma: -slope, intercept: my - slope * mx, r_squared })
}

/// Sample mean and its standard error.
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
