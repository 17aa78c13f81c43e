//! Chernoff-type semi-metrics between two hypotheses and the exact-recovery
//! threshold tests built on them.
//!
//! For Gaussian edge sums the exponent at interpolation parameter `t` is
//! `sum_k D_k(t)` with
//!
//! ```text
//! D_k(t) = t(1-t)(mu_a - mu_b)^2 / (2 S_k(t))
//!        + 1/2 log( S_k(t) / (Sigma_a^(1-t) Sigma_b^t) ),   S_k(t) = (1-t) Sigma_a + t Sigma_b
//! ```
//!
//! which is `-log` of the Chernoff integral `int f_a^t f_b^(1-t)` per
//! coordinate. For Gamma edge sums (exponential weights) the exponent is
//! `sum_k p_k log( ((1-t) l_a + t l_b) / (l_a^(1-t) l_b^t) )`. The semi-metric
//! is the maximum of the exponent over `t` in `[0, 1]`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::model::{
    aggregate_gaussian, aggregate_thinned_gaussian, CommunityModel, EdgeModel,
    ThinnedGaussianEdgeModel,
};
use crate::search::{maximize_unit_interval, polish_stationary};

pub const GRID_POINTS: usize = 101;
pub const T_TOLERANCE: f64 = 1e-9;
/// `|margin|` below this is reported as inconclusive in the order-log regime.
pub const INCONCLUSIVE_BAND: f64 = 0.05;
/// `auto` switches to the omega rule once the divergence exceeds this many `log n`.
pub const OMEGA_RATIO: f64 = 10.0;

/// Per-coordinate pieces of the Gaussian exponent at a fixed `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianExponentTerms {
    /// Mean of the normalized geometric mixture `f_a^t f_b^(1-t)`.
    pub mu_t: f64,
    /// Variance of the normalized geometric mixture.
    pub sigma_sq_t: f64,
    /// Exponent contribution `D_k(t)`.
    pub d: f64,
}

/// `log( ((1-t) a + t b) / (a^(1-t) b^t) )`, accurate when `a` and `b` are close.
#[inline]
pub(crate) fn mixing_log_gap(a: f64, b: f64, t: f64) -> f64 {
    let r = b / a - 1.0;
    (t * r).ln_1p() - t * r.ln_1p()
}

/// Exponent pieces for one coordinate.
pub fn gaussian_terms(mu_a: f64, mu_b: f64, var_a: f64, var_b: f64, t: f64) -> GaussianExponentTerms {
    let s = (1.0 - t) * var_a + t * var_b;
    let diff = mu_a - mu_b;
    GaussianExponentTerms {
        mu_t: (t * mu_a * var_b + (1.0 - t) * mu_b * var_a) / s,
        sigma_sq_t: var_a * var_b / s,
        d: t * (1.0 - t) * diff * diff / (2.0 * s) + 0.5 * mixing_log_gap(var_a, var_b, t),
    }
}

fn check_vectors(fields: [(&'static str, &[f64]); 4], positive: [bool; 4]) -> Result<()> {
    let k = fields[0].1.len();
    if k == 0 {
        return Err(invalid(fields[0].0, "vector must not be empty"));
    }
    for ((field, v), pos) in fields.iter().zip(positive) {
        if v.len() != k {
            return Err(Error::DimensionMismatch {
                field,
                expected: k,
                found: v.len(),
            });
        }
        if v.iter().any(|x| x.is_nan()) {
            return Err(invalid(field, "NaN entry"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(invalid(field, "non-finite entry"));
        }
        if pos && v.iter().any(|x| *x <= 0.0) {
            return Err(invalid(field, "entries must be > 0"));
        }
    }
    Ok(())
}

fn gaussian_exponent_raw(mu_a: &[f64], mu_b: &[f64], var_a: &[f64], var_b: &[f64], t: f64) -> f64 {
    (0..mu_a.len())
        .map(|k| gaussian_terms(mu_a[k], mu_b[k], var_a[k], var_b[k], t).d)
        .sum()
}

fn exponential_exponent_raw(rate_a: &[f64], rate_b: &[f64], sizes: &[f64], t: f64) -> f64 {
    (0..rate_a.len())
        .map(|k| sizes[k] * mixing_log_gap(rate_a[k], rate_b[k], t))
        .sum()
}

/// `sum_k D_k(t)` for two Gaussian edge-sum laws.
pub fn gaussian_exponent(mu_a: &[f64], mu_b: &[f64], var_a: &[f64], var_b: &[f64], t: f64) -> Result<f64> {
    check_vectors(
        [("mu_a", mu_a), ("mu_b", mu_b), ("Sigma_a", var_a), ("Sigma_b", var_b)],
        [false, false, true, true],
    )?;
    check_t(t)?;
    Ok(gaussian_exponent_raw(mu_a, mu_b, var_a, var_b, t))
}

/// The Gamma-family exponent at `t`.
pub fn exponential_exponent(rate_a: &[f64], rate_b: &[f64], sizes: &[f64], t: f64) -> Result<f64> {
    check_vectors(
        [("lambda_a", rate_a), ("lambda_b", rate_b), ("p", sizes), ("p", sizes)],
        [true, true, true, true],
    )?;
    check_t(t)?;
    Ok(exponential_exponent_raw(rate_a, rate_b, sizes, t))
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t", format!("{t} is outside [0, 1]")));
    }
    Ok(())
}

/// Semi-metric value together with its maximizer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceResult {
    pub value: f64,
    pub t_star: f64,
    /// Per-coordinate exponent contributions at `t_star`; they sum to `value`.
    pub terms: Vec<f64>,
    /// `value / log n`, when a node count is attached.
    pub normalized: Option<f64>,
}

impl DivergenceResult {
    fn zero(k: usize) -> Self {
        Self {
            value: 0.0,
            t_star: 0.5,
            terms: vec![0.0; k],
            normalized: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.normalized = Some(self.value / (n as f64).ln());
        self
    }
}

/// d/dt of the Gaussian exponent for one coordinate.
fn gaussian_slope(mu_a: f64, mu_b: f64, var_a: f64, var_b: f64, t: f64) -> f64 {
    let delta = var_b - var_a;
    let s = var_a + t * delta;
    let diff2 = (mu_a - mu_b).powi(2);
    let quad = 0.5 * diff2 * ((1.0 - 2.0 * t) * s - t * (1.0 - t) * delta) / (s * s);
    quad + 0.5 * (delta / s - (var_b / var_a).ln())
}

/// d/dt of the Gamma-family exponent for one coordinate (without the size factor).
fn exponential_slope(rate_a: f64, rate_b: f64, t: f64) -> f64 {
    (rate_b - rate_a) / ((1.0 - t) * rate_a + t * rate_b) - (rate_b / rate_a).ln()
}

fn maximize(
    k: usize,
    identical: bool,
    exponent: impl Fn(f64) -> f64,
    slope: impl Fn(f64) -> f64,
    terms: impl Fn(f64) -> Vec<f64>,
) -> DivergenceResult {
    if identical {
        return DivergenceResult::zero(k);
    }
    let best = maximize_unit_interval(&exponent, GRID_POINTS, T_TOLERANCE);
    // the exponent is flat to rounding near its peak, so pin t* on the slope sign
    let width = 1e-6;
    let t_star = polish_stationary(
        &slope,
        (best.arg - width).max(0.0),
        (best.arg + width).min(1.0),
        1e-14,
    )
    .unwrap_or(best.arg);
    let terms = terms(t_star);
    let value: f64 = terms.iter().sum();
    DivergenceResult {
        value: value.max(0.0),
        t_star,
        terms,
        normalized: None,
    }
}

/// Gaussian semi-metric between columns `(mu_a, Sigma_a)` and `(mu_b, Sigma_b)`.
pub fn gaussian_divergence(mu_a: &[f64], mu_b: &[f64], var_a: &[f64], var_b: &[f64]) -> Result<DivergenceResult> {
    check_vectors(
        [("mu_a", mu_a), ("mu_b", mu_b), ("Sigma_a", var_a), ("Sigma_b", var_b)],
        [false, false, true, true],
    )?;
    let identical = mu_a == mu_b && var_a == var_b;
    Ok(maximize(
        mu_a.len(),
        identical,
        |t| gaussian_exponent_raw(mu_a, mu_b, var_a, var_b, t),
        |t| {
            (0..mu_a.len())
                .map(|k| gaussian_slope(mu_a[k], mu_b[k], var_a[k], var_b[k], t))
                .sum()
        },
        |t| {
            (0..mu_a.len())
                .map(|k| gaussian_terms(mu_a[k], mu_b[k], var_a[k], var_b[k], t).d)
                .collect()
        },
    ))
}

/// Exponential-weight semi-metric between rate columns, weighted by sizes `p`.
pub fn exponential_divergence(rate_a: &[f64], rate_b: &[f64], sizes: &[f64]) -> Result<DivergenceResult> {
    check_vectors(
        [("lambda_a", rate_a), ("lambda_b", rate_b), ("p", sizes), ("p", sizes)],
        [true, true, true, true],
    )?;
    let identical = rate_a == rate_b;
    Ok(maximize(
        rate_a.len(),
        identical,
        |t| exponential_exponent_raw(rate_a, rate_b, sizes, t),
        |t| {
            (0..rate_a.len())
                .map(|k| sizes[k] * exponential_slope(rate_a[k], rate_b[k], t))
                .sum()
        },
        |t| {
            (0..rate_a.len())
                .map(|k| sizes[k] * mixing_log_gap(rate_a[k], rate_b[k], t))
                .collect()
        },
    ))
}

/// Divergence between the hypotheses `H = i` and `H = j` of a model.
pub fn column_divergence(model: &CommunityModel, edges: &EdgeModel, i: usize, j: usize) -> Result<DivergenceResult> {
    edges.validate_for(model)?;
    let k = model.k();
    if i >= k || j >= k {
        return Err(invalid("pair", format!("({i}, {j}) out of range for K = {k}")));
    }
    let result = match edges {
        EdgeModel::Gaussian(g) => {
            let agg = aggregate_gaussian(model, g)?;
            gaussian_divergence(
                &agg.mean_column(i),
                &agg.mean_column(j),
                &agg.variance_column(i),
                &agg.variance_column(j),
            )?
        }
        EdgeModel::ThinnedGaussian(t) => {
            let agg = aggregate_thinned_gaussian(model, t)?;
            gaussian_divergence(
                &agg.mean_column(i),
                &agg.mean_column(j),
                &agg.variance_column(i),
                &agg.variance_column(j),
            )?
        }
        EdgeModel::Exponential(e) => {
            let sizes: Vec<f64> = model.sizes().iter().map(|&p| p as f64).collect();
            exponential_divergence(&e.rate().column(i), &e.rate().column(j), &sizes)?
        }
    };
    Ok(result.with_n(model.n()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseMinimum {
    pub value: f64,
    pub pair: (usize, usize),
    pub result: DivergenceResult,
}

/// Smallest divergence over all unordered community pairs; ties go to the
/// lexicographically first pair.
pub fn min_pairwise_divergence(model: &CommunityModel, edges: &EdgeModel) -> Result<PairwiseMinimum> {
    let k = model.k();
    if k < 2 {
        return Err(invalid("K", "at least two communities are required"));
    }
    let mut best: Option<PairwiseMinimum> = None;
    for i in 0..k {
        for j in (i + 1)..k {
            let result = column_divergence(model, edges, i, j)?;
            if best.as_ref().map_or(true, |b| result.value < b.value) {
                best = Some(PairwiseMinimum {
                    value: result.value,
                    pair: (i, j),
                    result,
                });
            }
        }
    }
    Ok(best.expect("K >= 2 yields at least one pair"))
}

/// Which asymptotic rule a threshold test applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Pick by comparing the divergence to `log n`.
    Auto,
    /// Divergence grows faster than `log n`: recovery iff every pair differs.
    Omega,
    /// Divergence of order `log n`: recovery iff `min / log n > 1`.
    OrderLog,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Auto => "auto",
            Regime::Omega => "omega",
            Regime::OrderLog => "order-log",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Regime::Auto),
            "omega" => Ok(Regime::Omega),
            "order-log" | "order_log" => Ok(Regime::OrderLog),
            other => Err(invalid("regime", format!("unknown regime `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryVerdict {
    pub possible: bool,
    /// `min / log n - 1` under the order-log rule, the minimum itself under omega.
    pub margin: f64,
    pub regime_used: Regime,
    pub min_divergence: f64,
    pub normalized: f64,
    pub pair: (usize, usize),
    /// Margin within [`INCONCLUSIVE_BAND`] of zero under the order-log rule.
    pub inconclusive: bool,
}

fn verdict(min: &PairwiseMinimum, log_n: f64, regime: Regime) -> RecoveryVerdict {
    let normalized = min.value / log_n;
    let regime_used = match regime {
        Regime::Auto if normalized > OMEGA_RATIO => Regime::Omega,
        Regime::Auto => Regime::OrderLog,
        r => r,
    };
    let (possible, margin, inconclusive) = match regime_used {
        Regime::Omega => (min.value > 0.0, min.value, false),
        _ => {
            let margin = normalized - 1.0;
            (margin > 0.0, margin, margin.abs() < INCONCLUSIVE_BAND)
        }
    };
    RecoveryVerdict {
        possible,
        margin,
        regime_used,
        min_divergence: min.value,
        normalized,
        pair: min.pair,
        inconclusive,
    }
}

/// Exact-recovery test for a complete weighted graph.
pub fn recovery_predicate(model: &CommunityModel, edges: &EdgeModel, regime: Regime) -> Result<RecoveryVerdict> {
    let min = min_pairwise_divergence(model, edges)?;
    Ok(verdict(&min, model.log_n(), regime))
}

/// Exact-recovery test for the thinned (incomplete) Gaussian graph, always in
/// the order-log regime on the Gaussian-approximated edge sums.
pub fn thinned_recovery_predicate(model: &CommunityModel, edges: &ThinnedGaussianEdgeModel) -> Result<RecoveryVerdict> {
    let min = min_pairwise_divergence(model, &EdgeModel::ThinnedGaussian(edges.clone()))?;
    Ok(verdict(&min, model.log_n(), Regime::OrderLog))
}
