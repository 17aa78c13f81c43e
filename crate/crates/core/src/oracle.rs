//! Numerical ground truth for the closed forms elsewhere in the crate:
//! min-of-densities integrals, Chernoff integrals by quadrature, the
//! constant-slack sandwich around the semi-metrics, and the binomial mixture
//! density of a thinned edge sum together with its Gaussian approximation.
//!
//! Densities here come from `statrs` rather than from the library's own
//! formulas, so agreement between the two is a genuine cross-check.

use serde::Serialize;
use statrs::distribution::{Continuous, ContinuousCDF, Gamma, Normal};
use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::gamma_ur;

use crate::error::{invalid, Error, Result};
use crate::model::{aggregate_gaussian, aggregate_thinned_gaussian, CommunityModel, EdgeModel};

/// Smallest integral `min_integral` reports before declaring underflow.
pub const UNDERFLOW: f64 = 1e-300;
/// Mass allowed outside the quadrature bounds, per density.
pub const TAIL_MASS: f64 = 1e-12;
/// Binomial weights below this are dropped from the mixture.
pub const BINOMIAL_CUTOFF: f64 = 1e-14;
/// Cap on inner-integral evaluations for nested quadrature.
pub const MAX_EVALUATIONS: u64 = 100_000_000;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.carry
    }
}

/// Composite Simpson rule over `points` (odd) equally spaced nodes.
fn simpson(lo: f64, hi: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let m = points | 1;
    let h = (hi - lo) / (m - 1) as f64;
    let mut acc = Accumulator::default();
    for i in 0..m {
        let w = if i == 0 || i == m - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * f(lo + i as f64 * h));
    }
    acc.total() * h / 3.0
}

/// Simpson's rule after the substitution `x = lo + (hi - lo)(1 - cos(pi s)) / 2`,
/// which clusters nodes at both ends and smooths endpoint singularities.
fn graded_simpson(lo: f64, hi: f64, points: usize, f: impl Fn(f64) -> f64) -> f64 {
    let len = hi - lo;
    if len <= 0.0 {
        return 0.0;
    }
    let pi = std::f64::consts::PI;
    simpson(0.0, 1.0, points, |s| {
        let x = lo + 0.5 * len * (1.0 - (pi * s).cos());
        f(x) * 0.5 * len * pi * (pi * s).sin()
    })
}

/// One coordinate of a product density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Marginal {
    Normal { mean: f64, var: f64 },
    Gamma { shape: f64, rate: f64 },
}

impl Marginal {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Marginal::Normal { mean, var } => mean.is_finite() && var.is_finite() && var > 0.0,
            Marginal::Gamma { shape, rate } => shape.is_finite() && rate.is_finite() && shape > 0.0 && rate > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid("density", format!("invalid marginal {self:?}")))
        }
    }

    fn normal(mean: f64, var: f64) -> Normal {
        Normal::new(mean, var.sqrt()).expect("validated normal")
    }

    fn gamma(shape: f64, rate: f64) -> Gamma {
        Gamma::new(shape, rate).expect("validated gamma")
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        match *self {
            Marginal::Normal { mean, var } => Self::normal(mean, var).ln_pdf(x),
            Marginal::Gamma { shape, rate } => {
                if x <= 0.0 {
                    // statrs handles the x = 0 limit; negative support is empty
                    if x < 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        Self::gamma(shape, rate).ln_pdf(0.0)
                    }
                } else {
                    Self::gamma(shape, rate).ln_pdf(x)
                }
            }
        }
    }

    /// Probability of `(lo, hi)`, computed from whichever tail keeps precision.
    fn interval_mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let (cdf, sf, center): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>, f64) = match *self {
            Marginal::Normal { mean, var } => {
                let d = Self::normal(mean, var);
                (Box::new(move |x| d.cdf(x)), Box::new(move |x| d.sf(x)), mean)
            }
            Marginal::Gamma { shape, rate } => {
                let d = Self::gamma(shape, rate);
                let lo_clip = |x: f64| x.max(0.0);
                (
                    Box::new(move |x| d.cdf(lo_clip(x))),
                    Box::new(move |x| d.sf(lo_clip(x))),
                    shape / rate,
                )
            }
        };
        let upper = |x: f64| if x == f64::INFINITY { 0.0 } else { sf(x) };
        let lower = |x: f64| if x == f64::NEG_INFINITY { 0.0 } else { cdf(x) };
        if lo >= center {
            (upper(lo) - upper(hi)).max(0.0)
        } else if hi <= center {
            (lower(hi) - lower(lo)).max(0.0)
        } else {
            (1.0 - lower(lo) - upper(hi)).max(0.0)
        }
    }

    fn tail_mass(&self, lo: f64, hi: f64) -> f64 {
        1.0 - self.interval_mass(lo, hi)
    }
}

/// Product density over `K` independent coordinates, all of one family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductDensity {
    marginals: Vec<Marginal>,
}

impl ProductDensity {
    pub fn gaussian(mean: &[f64], var: &[f64]) -> Result<Self> {
        if mean.len() != var.len() {
            return Err(Error::DimensionMismatch {
                field: "var",
                expected: mean.len(),
                found: var.len(),
            });
        }
        Self::new(mean.iter().zip(var).map(|(&mean, &var)| Marginal::Normal { mean, var }).collect())
    }

    pub fn gamma(shape: &[f64], rate: &[f64]) -> Result<Self> {
        if shape.len() != rate.len() {
            return Err(Error::DimensionMismatch {
                field: "rate",
                expected: shape.len(),
                found: rate.len(),
            });
        }
        Self::new(shape.iter().zip(rate).map(|(&shape, &rate)| Marginal::Gamma { shape, rate }).collect())
    }

    pub fn new(marginals: Vec<Marginal>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(invalid("density", "needs at least one coordinate"));
        }
        for m in &marginals {
            m.validate()?;
        }
        Ok(Self { marginals })
    }

    pub fn dim(&self) -> usize {
        self.marginals.len()
    }

    pub fn marginals(&self) -> &[Marginal] {
        &self.marginals
    }

    pub fn ln_pdf(&self, w: &[f64]) -> f64 {
        self.marginals.iter().zip(w).map(|(m, &x)| m.ln_pdf(x)).sum()
    }
}

/// Laws of `W` under hypotheses `i` and `j` for a model's aggregated columns.
/// Thinned models use their Gaussian moment approximation.
pub fn column_densities(
    model: &CommunityModel,
    edges: &EdgeModel,
    i: usize,
    j: usize,
) -> Result<(ProductDensity, ProductDensity)> {
    edges.validate_for(model)?;
    if i >= model.k() || j >= model.k() {
        return Err(invalid("pair", format!("({i}, {j}) out of range for K = {}", model.k())));
    }
    let gaussian = |agg: crate::model::AggregatedGaussianParams| -> Result<_> {
        Ok((
            ProductDensity::gaussian(&agg.mean_column(i), &agg.variance_column(i))?,
            ProductDensity::gaussian(&agg.mean_column(j), &agg.variance_column(j))?,
        ))
    };
    match edges {
        EdgeModel::Gaussian(g) => gaussian(aggregate_gaussian(model, g)?),
        EdgeModel::ThinnedGaussian(t) => gaussian(aggregate_thinned_gaussian(model, t)?),
        EdgeModel::Exponential(e) => {
            let shape: Vec<f64> = model.sizes().iter().map(|&p| p as f64).collect();
            Ok((
                ProductDensity::gamma(&shape, &e.rate().column(i))?,
                ProductDensity::gamma(&shape, &e.rate().column(j))?,
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Nodes per coordinate (made odd for Simpson's rule).
    pub points: usize,
    /// Half-width of Gaussian bounds in standard deviations.
    pub sds: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { points: 4001, sds: 12.0 }
    }
}

impl QuadratureSpec {
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * (self.points | 1) - 1,
            ..*self
        }
    }
}

/// Integration variable for one coordinate: `x` itself for Gaussian
/// coordinates, `u = log x` for Gamma coordinates (Jacobian `e^u`).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Axis {
    lo: f64,
    hi: f64,
    log_scale: bool,
}

impl Axis {
    fn x(&self, u: f64) -> f64 {
        if self.log_scale {
            u.exp()
        } else {
            u
        }
    }

    fn ln_jacobian(&self, u: f64) -> f64 {
        if self.log_scale {
            u
        } else {
            0.0
        }
    }

    fn x_bounds(&self) -> (f64, f64) {
        (self.x(self.lo), self.x(self.hi))
    }
}

/// Bounds covering all but [`TAIL_MASS`] of every listed marginal.
fn axis_for(marginals: &[Marginal], spec: &QuadratureSpec) -> Result<Axis> {
    let axis = match marginals[0] {
        Marginal::Normal { .. } => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for m in marginals {
                let Marginal::Normal { mean, var } = *m else {
                    return Err(mixed_families());
                };
                lo = lo.min(mean - spec.sds * var.sqrt());
                hi = hi.max(mean + spec.sds * var.sqrt());
            }
            Axis { lo, hi, log_scale: false }
        }
        Marginal::Gamma { .. } => {
            let mut x_lo = f64::INFINITY;
            let mut x_hi: f64 = 0.0;
            for m in marginals {
                let Marginal::Gamma { shape, rate } = *m else {
                    return Err(mixed_families());
                };
                // P(X < x) <= (rate x)^shape / Gamma(shape + 1)
                let ln_x = ((1e-16f64).ln() + statrs::function::gamma::ln_gamma(shape + 1.0)) / shape - rate.ln();
                x_lo = x_lo.min(ln_x.exp());
                let sd = shape.sqrt() / rate;
                let mut x = shape / rate + spec.sds * sd;
                while gamma_ur(shape, rate * x) > 1e-16 {
                    x *= 2.0;
                }
                x_hi = x_hi.max(x);
            }
            Axis {
                lo: x_lo.ln(),
                hi: x_hi.ln(),
                log_scale: true,
            }
        }
    };
    let (a, b) = axis.x_bounds();
    for m in marginals {
        let tail = m.tail_mass(a, b);
        if tail > TAIL_MASS {
            return Err(Error::Numerical(format!(
                "quadrature bounds [{a}, {b}] leave mass {tail:e} of {m:?}"
            )));
        }
    }
    Ok(axis)
}

fn mixed_families() -> Error {
    Error::Unsupported("both densities must use the same family in every coordinate".into())
}

/// Points where `ln_a + ln f(x) = ln_b + ln g(x)`, sorted.
fn crossings(f: &Marginal, g: &Marginal, ln_a: f64, ln_b: f64) -> Vec<f64> {
    match (*f, *g) {
        (Marginal::Normal { mean: m1, var: v1 }, Marginal::Normal { mean: m2, var: v2 }) => {
            // q2 x^2 + q1 x + q0 = 0
            let q2 = -0.5 / v1 + 0.5 / v2;
            let q1 = m1 / v1 - m2 / v2;
            let q0 = -0.5 * m1 * m1 / v1 + 0.5 * m2 * m2 / v2 - 0.5 * v1.ln() + 0.5 * v2.ln() + ln_a - ln_b;
            let scale = q1.abs().max(q0.abs()).max(1e-300);
            if q2.abs() <= 1e-14 * scale {
                if q1 == 0.0 {
                    vec![]
                } else {
                    vec![-q0 / q1]
                }
            } else {
                let disc = q1 * q1 - 4.0 * q2 * q0;
                if disc < 0.0 {
                    return vec![];
                }
                // cancellation-free roots
                let s = -0.5 * (q1 + q1.signum() * disc.sqrt());
                let mut r = if s == 0.0 {
                    vec![0.0]
                } else {
                    vec![s / q2, q0 / s]
                };
                r.sort_by(f64::total_cmp);
                r.dedup();
                r
            }
        }
        (Marginal::Gamma { .. }, Marginal::Gamma { .. }) => {
            // phi(u) = difference of log densities at x = e^u; piecewise monotone
            let phi = |u: f64| {
                let x = u.exp();
                ln_a + f.ln_pdf(x) - ln_b - g.ln_pdf(x)
            };
            let (Marginal::Gamma { shape: k1, rate: r1 }, Marginal::Gamma { shape: k2, rate: r2 }) = (*f, *g) else {
                unreachable!()
            };
            let (u_lo, u_hi) = (-700.0, 700.0);
            let mut cuts = vec![u_lo];
            let stationary = (k1 - k2) / (r1 - r2);
            if stationary.is_finite() && stationary > 0.0 {
                let u0 = stationary.ln();
                if u0 > u_lo && u0 < u_hi {
                    cuts.push(u0);
                }
            }
            cuts.push(u_hi);
            let mut roots = Vec::new();
            for w in cuts.windows(2) {
                let (mut a, mut b) = (w[0], w[1]);
                let (fa, fb) = (phi(a), phi(b));
                if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
                    continue;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if phi(mid).signum() == fa.signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push((0.5 * (a + b)).exp());
            }
            roots
        }
        _ => vec![],
    }
}

/// `int min(A f, B g)` over one coordinate with `A = e^ln_a`, `B = e^ln_b`,
/// exactly: split at crossings and integrate each side by its CDF.
fn min_integral_1d(f: &Marginal, g: &Marginal, ln_a: f64, ln_b: f64) -> f64 {
    let (support_lo, support_hi) = match f {
        Marginal::Normal { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        Marginal::Gamma { .. } => (0.0, f64::INFINITY),
    };
    let mut cuts = vec![support_lo];
    cuts.extend(crossings(f, g, ln_a, ln_b).into_iter().filter(|c| *c > support_lo));
    cuts.push(support_hi);
    let mut acc = Accumulator::default();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let probe = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => {
                if lo > 0.0 {
                    2.0 * lo + 1.0
                } else {
                    lo + 1.0
                }
            }
            (false, true) => hi - hi.abs() - 1.0,
            (false, false) => 0.0,
        };
        let probe = if matches!(f, Marginal::Gamma { .. }) && probe <= 0.0 {
            0.5 * hi.min(1.0)
        } else {
            probe
        };
        let side_f = ln_a + f.ln_pdf(probe);
        let side_g = ln_b + g.ln_pdf(probe);
        let (ln_w, m) = if side_f <= side_g { (ln_a, f) } else { (ln_b, g) };
        let mass = m.interval_mass(lo, hi);
        if mass > 0.0 {
            acc.add((ln_w + mass.ln()).exp());
        }
    }
    acc.total()
}

/// `int min(rho_a f_a, rho_b f_b) dw` over `R^K` (or the positive orthant).
///
/// The last coordinate is integrated exactly through CDFs after splitting at
/// the crossing points; earlier coordinates use composite Simpson quadrature
/// on bounds covering all but [`TAIL_MASS`] of each density. Gamma
/// coordinates are integrated in `log w`.
pub fn min_integral(a: &ProductDensity, b: &ProductDensity, priors: (f64, f64), spec: &QuadratureSpec) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            field: "density",
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if !(priors.0 > 0.0 && priors.1 > 0.0) {
        return Err(invalid("priors", "must be positive"));
    }
    let k = a.dim();
    if k > 3 {
        return Err(Error::TooLarge(format!("quadrature supports K <= 3, got {k}")));
    }
    let points = (spec.points | 1) as u64;
    if points.saturating_pow(k as u32 - 1) > MAX_EVALUATIONS {
        return Err(Error::TooLarge(format!(
            "{points} points per coordinate is too many for K = {k}"
        )));
    }
    let axes = (0..k)
        .map(|c| axis_for(&[a.marginals[c], b.marginals[c]], spec))
        .collect::<Result<Vec<_>>>()?;

    fn nested(
        a: &ProductDensity,
        b: &ProductDensity,
        axes: &[Axis],
        spec: &QuadratureSpec,
        depth: usize,
        ln_a: f64,
        ln_b: f64,
    ) -> f64 {
        let (fa, fb) = (&a.marginals[depth], &b.marginals[depth]);
        if depth + 1 == a.dim() {
            return min_integral_1d(fa, fb, ln_a, ln_b);
        }
        let axis = axes[depth];
        let inner = |u: f64| {
            let x = axis.x(u);
            let j = axis.ln_jacobian(u);
            (ln_a + fa.ln_pdf(x) + j, ln_b + fb.ln_pdf(x) + j)
        };
        let integrand = |u: f64| {
            let (la, lb) = inner(u);
            nested(a, b, axes, spec, depth + 1, la, lb)
        };
        if depth + 2 != a.dim() {
            return simpson(axis.lo, axis.hi, spec.points, integrand);
        }
        // The inner integral has a square-root kink wherever the number of
        // crossings in the last coordinate changes; split there.
        let (ga, gb) = (&a.marginals[depth + 1], &b.marginals[depth + 1]);
        let count = |u: f64| {
            let (la, lb) = inner(u);
            crossings(ga, gb, la, lb).len()
        };
        let m = spec.points | 1;
        let h = (axis.hi - axis.lo) / (m - 1) as f64;
        let mut cuts = vec![axis.lo];
        let mut prev = count(axis.lo);
        for i in 1..m {
            let u = axis.lo + i as f64 * h;
            let c = count(u);
            if c != prev {
                let (mut lo, mut hi) = (u - h, u);
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if count(mid) == prev {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                cuts.push(0.5 * (lo + hi));
                prev = c;
            }
        }
        cuts.push(axis.hi);
        let span = axis.hi - axis.lo;
        let mut acc = Accumulator::default();
        for w in cuts.windows(2) {
            let share = ((w[1] - w[0]) / span * m as f64).ceil() as usize;
            acc.add(graded_simpson(w[0], w[1], share.max(129), &integrand));
        }
        acc.total()
    }

    let value = nested(a, b, &axes, spec, 0, priors.0.ln(), priors.1.ln());
    if !(value >= UNDERFLOW) {
        return Err(Error::Numerical(format!("min integral {value:e} underflows {UNDERFLOW:e}")));
    }
    Ok(value)
}

/// `ln int f^t g^(1-t)` for one coordinate by Simpson's rule in the log domain.
fn ln_chernoff_coord(f: &Marginal, g: &Marginal, t: f64, axis: &Axis, spec: &QuadratureSpec) -> f64 {
    let m = spec.points | 1;
    let h = (axis.hi - axis.lo) / (m - 1) as f64;
    let logs: Vec<f64> = (0..m)
        .map(|i| {
            let u = axis.lo + i as f64 * h;
            let x = axis.x(u);
            t * f.ln_pdf(x) + (1.0 - t) * g.ln_pdf(x) + axis.ln_jacobian(u)
        })
        .collect();
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut acc = Accumulator::default();
    for (i, l) in logs.iter().enumerate() {
        let w = if i == 0 || i == m - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * (l - peak).exp());
    }
    peak + (acc.total() * h / 3.0).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffEstimate {
    /// `max_t -ln int f_a^t f_b^(1-t)`
    pub value: f64,
    pub t: f64,
}

/// Chernoff information by quadrature: the integral factorizes over
/// coordinates, each evaluated by [`QuadratureSpec`] Simpson quadrature.
/// The maximum over `t` is taken on a `t_points` grid and then refined by a
/// parabola through the best grid point and its neighbours.
pub fn chernoff_by_quadrature(
    a: &ProductDensity,
    b: &ProductDensity,
    t_points: usize,
    spec: &QuadratureSpec,
) -> Result<ChernoffEstimate> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            field: "density",
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let axes = (0..a.dim())
        .map(|c| axis_for(&[a.marginals[c], b.marginals[c]], spec))
        .collect::<Result<Vec<_>>>()?;
    let exponent = |t: f64| -> f64 {
        -(0..a.dim())
            .map(|c| ln_chernoff_coord(&a.marginals[c], &b.marginals[c], t, &axes[c], spec))
            .sum::<f64>()
    };
    let m = t_points.max(3);
    let step = 1.0 / (m - 1) as f64;
    let values: Vec<f64> = (0..m).map(|i| exponent(i as f64 * step)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let mut estimate = ChernoffEstimate {
        value: values[best],
        t: best as f64 * step,
    };
    if best > 0 && best < m - 1 {
        let (y0, y1, y2) = (values[best - 1], values[best], values[best + 1]);
        let denom = y0 - 2.0 * y1 + y2;
        if denom < 0.0 {
            let t = (best as f64 + 0.5 * (y0 - y2) / denom) * step;
            let v = exponent(t);
            if v > estimate.value {
                estimate = ChernoffEstimate { value: v, t };
            }
        }
    }
    Ok(estimate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichSlack {
    pub divergence: f64,
    pub min_integral: f64,
    /// `divergence + ln min_integral`; bounded above by a constant.
    pub upper_slack: f64,
    /// `-(divergence + ln min_integral)`; bounded above by a constant.
    pub lower_slack: f64,
}

/// Measures how far `min_integral` sits from `exp(-divergence)`.
pub fn verify_sandwich(
    a: &ProductDensity,
    b: &ProductDensity,
    priors: (f64, f64),
    divergence: f64,
    spec: &QuadratureSpec,
) -> Result<SandwichSlack> {
    let integral = min_integral(a, b, priors, spec)?;
    let slack = divergence + integral.ln();
    Ok(SandwichSlack {
        divergence,
        min_integral: integral,
        upper_slack: slack,
        lower_slack: -slack,
    })
}

/// Largest `min(g1(t), g2(t))` over the grids, with
/// `g1 = (f_a / f_b)^(1-t)` and `g2 = (f_b / f_a)^t`. Evaluated in the log
/// domain; never exceeds 1 in exact arithmetic.
pub fn verify_lemma2(a: &ProductDensity, b: &ProductDensity, t_grid: &[f64], w_grid: &[Vec<f64>]) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            field: "density",
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let mut worst = 0.0f64;
    for w in w_grid {
        if w.len() != a.dim() {
            return Err(Error::DimensionMismatch {
                field: "w",
                expected: a.dim(),
                found: w.len(),
            });
        }
        let ln_ratio = a.ln_pdf(w) - b.ln_pdf(w);
        if !ln_ratio.is_finite() {
            continue;
        }
        for &t in t_grid {
            let ln_g1 = (1.0 - t) * ln_ratio;
            let ln_g2 = -t * ln_ratio;
            worst = worst.max(ln_g1.min(ln_g2).exp());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureComponent {
    /// Number of surviving edges.
    pub count: usize,
    pub weight: f64,
}

/// Density of a sum of `n` independent weights `N(mu, sigma_sq)`, each kept
/// with probability `theta`: a point mass at zero plus a binomial mixture of
/// Gaussians `N(i mu, i sigma_sq)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureDensity {
    pub n: usize,
    pub theta: f64,
    pub mu: f64,
    pub sigma_sq: f64,
    /// `(1 - theta)^n`
    pub atom_weight: f64,
    pub components: Vec<MixtureComponent>,
}

pub fn mixture_density(n: usize, theta: f64, mu: f64, sigma_sq: f64) -> Result<MixtureDensity> {
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", format!("{theta} is outside (0, 1)")));
    }
    if !mu.is_finite() {
        return Err(invalid("mu", "must be finite"));
    }
    if !(sigma_sq > 0.0 && sigma_sq.is_finite()) {
        return Err(invalid("sigma_sq", "must be positive"));
    }
    let ln_keep = theta.ln();
    let ln_drop = (-theta).ln_1p();
    let components = (1..=n)
        .filter_map(|i| {
            let ln_w = ln_binomial(n as u64, i as u64) + i as f64 * ln_keep + (n - i) as f64 * ln_drop;
            let weight = ln_w.exp();
            (weight >= BINOMIAL_CUTOFF).then_some(MixtureComponent { count: i, weight })
        })
        .collect();
    Ok(MixtureDensity {
        n,
        theta,
        mu,
        sigma_sq,
        atom_weight: (n as f64 * ln_drop).exp(),
        components,
    })
}

impl MixtureDensity {
    /// Continuous part at `z` (the atom is excluded).
    pub fn continuous_pdf(&self, z: f64) -> f64 {
        let mut acc = Accumulator::default();
        for c in &self.components {
            let i = c.count as f64;
            let var = i * self.sigma_sq;
            let d = z - i * self.mu;
            acc.add(c.weight * (-d * d / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt());
        }
        acc.total()
    }

    pub fn continuous_mass(&self) -> f64 {
        let mut acc = Accumulator::default();
        for c in &self.components {
            acc.add(c.weight);
        }
        acc.total()
    }

    /// `(n mu theta, n theta (sigma_sq + (1 - theta) mu^2))`
    pub fn gaussian_params(&self) -> (f64, f64) {
        let nt = self.n as f64 * self.theta;
        (nt * self.mu, nt * (self.sigma_sq + (1.0 - self.theta) * self.mu * self.mu))
    }

    pub fn gaussian_pdf(&self, z: f64) -> f64 {
        let (m, v) = self.gaussian_params();
        (-(z - m) * (z - m) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt()
    }

    /// Interval covering every retained component and the approximating
    /// Gaussian to 12 standard deviations.
    pub fn span(&self) -> (f64, f64) {
        let (m, v) = self.gaussian_params();
        let mut lo = m - 12.0 * v.sqrt();
        let mut hi = m + 12.0 * v.sqrt();
        for c in &self.components {
            let i = c.count as f64;
            let sd = (i * self.sigma_sq).sqrt();
            lo = lo.min(i * self.mu - 12.0 * sd);
            hi = hi.max(i * self.mu + 12.0 * sd);
        }
        (lo, hi)
    }

    /// Evaluation grid resolving the narrowest component (`sigma / 40`).
    pub fn evaluation_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.span();
        let h = self.sigma_sq.sqrt() / 40.0;
        let m = (((hi - lo) / h).ceil() as usize + 1).clamp(2001, 4_000_001) | 1;
        let step = (hi - lo) / (m - 1) as f64;
        (0..m).map(|i| lo + i as f64 * step).collect()
    }

    /// Atom plus Simpson quadrature of the continuous part.
    pub fn total_mass(&self) -> f64 {
        let grid = self.evaluation_grid();
        self.atom_weight + simpson(grid[0], grid[grid.len() - 1], grid.len(), |z| self.continuous_pdf(z))
    }

    /// `(z, continuous density, Gaussian approximation)` on `rows` points.
    pub fn density_table(&self, rows: usize) -> Vec<(f64, f64, f64)> {
        let (lo, hi) = self.span();
        let m = rows.max(2);
        (0..m)
            .map(|i| {
                let z = lo + (hi - lo) * i as f64 / (m - 1) as f64;
                (z, self.continuous_pdf(z), self.gaussian_pdf(z))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxDistance {
    /// Half the L1 gap over the continuous part plus half the atom, which the
    /// Gaussian approximation cannot represent.
    pub tv: f64,
    /// Largest absolute density gap on the evaluation grid.
    pub sup: f64,
    pub atom_weight: f64,
    pub gaussian_mean: f64,
    pub gaussian_var: f64,
    /// Strict local maxima of the continuous density on the grid.
    pub local_maxima: usize,
    pub grid_points: usize,
    pub continuous_mass: f64,
}

fn count_local_maxima(values: &[f64]) -> usize {
    values.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
}

pub fn approx_distance(n: usize, theta: f64, mu: f64, sigma_sq: f64) -> Result<ApproxDistance> {
    let mix = mixture_density(n, theta, mu, sigma_sq)?;
    Ok(approx_distance_of(&mix))
}

pub fn approx_distance_of(mix: &MixtureDensity) -> ApproxDistance {
    let grid = mix.evaluation_grid();
    let f_mix: Vec<f64> = grid.iter().map(|&z| mix.continuous_pdf(z)).collect();
    let gaps: Vec<f64> = grid.iter().zip(&f_mix).map(|(&z, f)| (f - mix.gaussian_pdf(z)).abs()).collect();
    let h = grid[1] - grid[0];
    let mut acc = Accumulator::default();
    let last = gaps.len() - 1;
    for (i, g) in gaps.iter().enumerate() {
        let w = if i == 0 || i == last {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc.add(w * g);
    }
    let l1 = acc.total() * h / 3.0;
    let (gaussian_mean, gaussian_var) = mix.gaussian_params();
    ApproxDistance {
        tv: 0.5 * l1 + 0.5 * mix.atom_weight,
        sup: gaps.iter().cloned().fold(0.0, f64::max),
        atom_weight: mix.atom_weight,
        gaussian_mean,
        gaussian_var,
        local_maxima: count_local_maxima(&f_mix),
        grid_points: grid.len(),
        continuous_mass: mix.continuous_mass(),
    }
}

/// Outcome of one fixture in [`verification_suite`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub expected: String,
}

/// Frozen band for `|divergence + ln min_integral|` across scaling families.
pub const SLACK_BAND: f64 = 3.0;

/// Gaussian mean gaps and Gamma sizes of the sandwich scaling families.
pub const GAUSSIAN_GAPS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
pub const GAMMA_SIZES: [f64; 3] = [1.0, 5.0, 25.0];

/// Sandwich slacks for the scaling families, with equal priors of 1/2:
/// unit-variance Gaussians at the listed mean gaps, then `Gamma(p, 1)`
/// against `Gamma(p, 2)` at the listed sizes.
pub fn sandwich_families(spec: &QuadratureSpec) -> Result<Vec<(String, SandwichSlack)>> {
    use crate::divergence::{exponential_divergence, gaussian_divergence};
    let mut out = Vec::new();
    for g in GAUSSIAN_GAPS {
        let a = ProductDensity::gaussian(&[0.0], &[1.0])?;
        let b = ProductDensity::gaussian(&[g], &[1.0])?;
        let d = gaussian_divergence(&[0.0], &[g], &[1.0], &[1.0])?.value;
        out.push((format!("gaussian gap {g}"), verify_sandwich(&a, &b, (0.5, 0.5), d, spec)?));
    }
    for p in GAMMA_SIZES {
        let a = ProductDensity::gamma(&[p], &[1.0])?;
        let b = ProductDensity::gamma(&[p], &[2.0])?;
        let d = exponential_divergence(&[1.0], &[2.0], &[p])?.value;
        out.push((format!("gamma p {p}"), verify_sandwich(&a, &b, (0.5, 0.5), d, spec)?));
    }
    Ok(out)
}

/// The fixture checks behind the `verify` command: exact min-integral
/// values, the constant-slack sandwich, the prior-weighted upper bound, and
/// the `min(g1, g2) <= 1` property on a deterministic grid.
pub fn verification_suite(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    use statrs::function::erf::erfc;
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, value: f64, expected: String| {
        checks.push(Check {
            name: name.to_string(),
            passed,
            value,
            expected,
        })
    };

    let n01 = ProductDensity::gaussian(&[0.0], &[1.0])?;
    let v = min_integral(&n01, &n01, (0.5, 0.5), spec)?;
    push("min integral, identical halves", (v - 0.5).abs() < 1e-10, v, "0.5".into());

    let n21 = ProductDensity::gaussian(&[2.0], &[1.0])?;
    let exact = erfc(1.0 / std::f64::consts::SQRT_2);
    let v = min_integral(&n01, &n21, (1.0, 1.0), spec)?;
    push(
        "min integral, N(0,1) vs N(2,1)",
        ((v - exact) / exact).abs() < 1e-6,
        v,
        format!("{exact}"),
    );

    let g1 = ProductDensity::gamma(&[1.0], &[1.0])?;
    let g2 = ProductDensity::gamma(&[1.0], &[2.0])?;
    let v = min_integral(&g1, &g2, (1.0, 1.0), spec)?;
    push("min integral, Exp(1) vs Exp(2)", ((v - 0.75) / 0.75).abs() < 1e-6, v, "0.75".into());

    let two_d_a = ProductDensity::gaussian(&[0.0, 1.0], &[1.0, 2.0])?;
    let two_d_b = ProductDensity::gaussian(&[1.5, 0.0], &[1.5, 1.0])?;
    let coarse = min_integral(&two_d_a, &two_d_b, (0.5, 0.5), spec)?;
    let fine = min_integral(&two_d_a, &two_d_b, (0.5, 0.5), &spec.refined())?;
    let rel = ((fine - coarse) / fine).abs();
    push("min integral, grid refinement (K = 2)", rel < 1e-8, rel, "< 1e-8".into());

    let slacks = sandwich_families(spec)?;
    for (name, s) in &slacks {
        push(
            &format!("sandwich slack, {name}"),
            s.upper_slack.abs() <= SLACK_BAND,
            s.upper_slack,
            format!("within [-{SLACK_BAND}, {SLACK_BAND}]"),
        );
        // upper bound with the explicit prior constant: -ln I >= D - ln max(rho)
        let lhs = -s.min_integral.ln();
        push(
            &format!("prior-weighted upper bound, {name}"),
            lhs >= s.divergence - 0.5f64.ln() - 1e-9,
            lhs,
            format!(">= {}", s.divergence - 0.5f64.ln()),
        );
    }
    let divs: Vec<f64> = slacks.iter().map(|(_, s)| s.divergence).collect();
    let spread = |xs: &[f64]| xs.iter().cloned().fold(0.0, f64::max) / xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let g_spread = spread(&divs[..GAUSSIAN_GAPS.len()]);
    push("gaussian divergence spread", g_spread > 10.0, g_spread, "> 10".into());
    let e_spread = spread(&divs[GAUSSIAN_GAPS.len()..]);
    push("gamma divergence spread", e_spread > 10.0, e_spread, "> 10".into());

    let t_grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let a = ProductDensity::gaussian(&[0.0], &[1.0])?;
    let b = ProductDensity::gaussian(&[3.0], &[2.0])?;
    let w_grid: Vec<Vec<f64>> = (0..=400).map(|i| vec![-10.0 + i as f64 * 0.05]).collect();
    let v = verify_lemma2(&a, &b, &t_grid, &w_grid)?;
    push("min(g1, g2) <= 1, gaussian", v <= 1.0 + 1e-12, v, "<= 1".into());
    let a = ProductDensity::gamma(&[3.0], &[1.0])?;
    let b = ProductDensity::gamma(&[3.0], &[2.5])?;
    let w_grid: Vec<Vec<f64>> = (1..=400).map(|i| vec![i as f64 * 0.05]).collect();
    let v = verify_lemma2(&a, &b, &t_grid, &w_grid)?;
    push("min(g1, g2) <= 1, gamma", v <= 1.0 + 1e-12, v, "<= 1".into());

    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erfc;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn identical_densities_give_half() {
        let a = ProductDensity::gaussian(&[1.0, -2.0], &[2.0, 0.5]).unwrap();
        let v = min_integral(&a, &a, (0.5, 0.5), &spec()).unwrap();
        assert!((v - 0.5).abs() < 1e-10, "{v}");
        let g = ProductDensity::gamma(&[4.0], &[1.5]).unwrap();
        assert!((min_integral(&g, &g, (0.5, 0.5), &spec()).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn equal_variance_overlap() {
        let a = ProductDensity::gaussian(&[0.0], &[1.0]).unwrap();
        let b = ProductDensity::gaussian(&[2.0], &[1.0]).unwrap();
        let v = min_integral(&a, &b, (1.0, 1.0), &spec()).unwrap();
        let exact = erfc(1.0 / std::f64::consts::SQRT_2);
        // statrs' erfc is good to a few 1e-11 here
        assert!((v - 0.317_310_507_862_914_1).abs() < 1e-9);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn exponential_overlap_is_three_quarters() {
        // e^-x and 2 e^-2x cross at log 2: int_0^log2 e^-x + int_log2^inf 2 e^-2x
        let a = ProductDensity::gamma(&[1.0], &[1.0]).unwrap();
        let b = ProductDensity::gamma(&[1.0], &[2.0]).unwrap();
        let v = min_integral(&a, &b, (1.0, 1.0), &spec()).unwrap();
        assert!((v - 0.75).abs() < 1e-12, "{v}");

        // a shared outer factor integrates to one
        let a = ProductDensity::gamma(&[4.0, 1.0], &[2.0, 1.0]).unwrap();
        let b = ProductDensity::gamma(&[4.0, 1.0], &[2.0, 2.0]).unwrap();
        let v = min_integral(&a, &b, (1.0, 1.0), &spec()).unwrap();
        assert!((v - 0.75).abs() < 1e-9, "{v}");
    }

    #[test]
    fn unequal_shapes_are_handled() {
        // compare against brute-force Simpson of min in log x
        let a = ProductDensity::gamma(&[2.0], &[1.0]).unwrap();
        let b = ProductDensity::gamma(&[5.0], &[1.5]).unwrap();
        let v = min_integral(&a, &b, (0.3, 0.7), &spec()).unwrap();
        let brute = simpson(-30.0, 5.0, 400_001, |u| {
            let x: f64 = u.exp();
            (0.3f64.ln() + a.ln_pdf(&[x])).min(0.7f64.ln() + b.ln_pdf(&[x])).exp() * x
        });
        assert!((v - brute).abs() < 1e-9, "{v} vs {brute}");
    }

    #[test]
    fn two_dimensional_matches_brute_force() {
        let a = ProductDensity::gaussian(&[0.0, 1.0], &[1.0, 2.0]).unwrap();
        let b = ProductDensity::gaussian(&[1.5, 0.0], &[1.5, 1.0]).unwrap();
        let v = min_integral(&a, &b, (0.4, 0.6), &spec()).unwrap();
        // plain 2-D Simpson converges slowly across the kink of min(); it
        // approaches from above and sits within 5e-8 at this resolution
        let brute = simpson(-12.0, 14.0, 3201, |x| {
            simpson(-16.0, 18.0, 3201, |y| {
                (0.4f64.ln() + a.ln_pdf(&[x, y])).min(0.6f64.ln() + b.ln_pdf(&[x, y])).exp()
            })
        });
        assert!(brute > v && brute - v < 1e-7, "{v} vs {brute}");
        let fine = min_integral(&a, &b, (0.4, 0.6), &spec().refined()).unwrap();
        assert!(((fine - v) / fine).abs() < 1e-8);
    }

    #[test]
    fn min_integral_below_smaller_prior() {
        let a = ProductDensity::gaussian(&[0.0], &[1.0]).unwrap();
        let b = ProductDensity::gaussian(&[0.3], &[1.4]).unwrap();
        for (pa, pb) in [(0.2, 0.8), (0.5, 0.5), (0.9, 0.1)] {
            let v = min_integral(&a, &b, (pa, pb), &spec()).unwrap();
            assert!(v <= f64::min(pa, pb) + 1e-12);
        }
    }

    #[test]
    fn limits_and_underflow() {
        let a = ProductDensity::gaussian(&[0.0; 4], &[1.0; 4]).unwrap();
        assert!(matches!(min_integral(&a, &a, (0.5, 0.5), &spec()), Err(Error::TooLarge(_))));
        let a = ProductDensity::gaussian(&[0.0], &[1.0]).unwrap();
        let b = ProductDensity::gaussian(&[80.0], &[1.0]).unwrap();
        assert!(matches!(min_integral(&a, &b, (0.5, 0.5), &spec()), Err(Error::Numerical(_))));
        assert!(ProductDensity::gaussian(&[0.0], &[0.0]).is_err());
        let g = ProductDensity::gamma(&[1.0], &[1.0]).unwrap();
        assert!(matches!(min_integral(&a, &g, (0.5, 0.5), &spec()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sandwich_identical_is_log_two() {
        let a = ProductDensity::gaussian(&[0.0], &[1.0]).unwrap();
        let s = verify_sandwich(&a, &a, (0.5, 0.5), 0.0, &spec()).unwrap();
        assert!((s.upper_slack + std::f64::consts::LN_2).abs() < 1e-10);
        assert!((s.lower_slack - std::f64::consts::LN_2).abs() < 1e-10);
    }

    #[test]
    fn chernoff_quadrature_matches_known_values() {
        let a = ProductDensity::gaussian(&[0.0], &[1.0]).unwrap();
        let b = ProductDensity::gaussian(&[2.0], &[1.0]).unwrap();
        let c = chernoff_by_quadrature(&a, &b, 1001, &spec()).unwrap();
        assert!((c.value - 0.5).abs() < 1e-9);
        assert!((c.t - 0.5).abs() < 1e-6);
        // Exp(1) vs Exp(2): max_t log((1 + t) / 2^t) at t = 1/ln 2 - 1
        let a = ProductDensity::gamma(&[1.0], &[1.0]).unwrap();
        let b = ProductDensity::gamma(&[1.0], &[2.0]).unwrap();
        let c = chernoff_by_quadrature(&a, &b, 1001, &spec()).unwrap();
        let t = 1.0 / std::f64::consts::LN_2 - 1.0;
        let exact = (1.0 + t).ln() - t * std::f64::consts::LN_2;
        assert!(((c.value - exact) / exact).abs() < 1e-8, "{} vs {exact}", c.value);
        // f_a^t f_b^(1-t) puts t on the rate-1 density
        assert!((c.t - (1.0 - t)).abs() < 1e-5);
    }

    #[test]
    fn lemma2_boundaries() {
        let a = ProductDensity::gaussian(&[0.0], &[1.0]).unwrap();
        let b = ProductDensity::gaussian(&[3.0], &[2.0]).unwrap();
        let ws: Vec<Vec<f64>> = (0..200).map(|i| vec![-5.0 + 0.06 * i as f64]).collect();
        assert_eq!(verify_lemma2(&a, &b, &[0.0], &ws).unwrap(), 1.0);
        assert_eq!(verify_lemma2(&a, &b, &[1.0], &ws).unwrap(), 1.0);
        assert!(verify_lemma2(&a, &b, &[0.3, 0.7], &ws).unwrap() <= 1.0);
    }

    #[test]
    fn mixture_limits_and_normalization() {
        let m = mixture_density(10, 1e-9, 1.0, 1.0).unwrap();
        assert!((m.atom_weight - 1.0).abs() < 1e-7);
        assert!(m.continuous_mass() < 1e-7);

        let n = 10_000;
        let theta = (n as f64).ln() / n as f64;
        let m = mixture_density(n, theta, 4.0, 1.0).unwrap();
        let exact_atom = (n as f64 * (1.0 - theta).ln()).exp();
        assert!((m.atom_weight - exact_atom).abs() < 1e-15);
        assert!((m.atom_weight - 1e-4).abs() / 1e-4 < 5e-3);
        let total = m.atom_weight + m.continuous_mass();
        assert!(total <= 1.0 + 1e-12 && total >= 1.0 - 1e-10);
        assert!((m.total_mass() - 1.0).abs() < 1e-8);
        assert!(m.components.len() < 80);
        assert!(mixture_density(10, 0.0, 1.0, 1.0).is_err());
        assert!(mixture_density(10, 0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn component_moments() {
        let m = mixture_density(5, 0.5, 2.0, 3.0).unwrap();
        // E[Z] over the continuous part plus the atom at zero
        let mean: f64 = m.components.iter().map(|c| c.weight * c.count as f64 * 2.0).sum();
        assert!((mean - 5.0 * 0.5 * 2.0).abs() < 1e-12);
        let (gm, gv) = m.gaussian_params();
        assert!((gm - 5.0).abs() < 1e-12);
        assert!((gv - 2.5 * (3.0 + 0.5 * 4.0)).abs() < 1e-12);
    }

    #[test]
    fn approximation_degrades_with_mean() {
        let n = 10_000;
        let theta = (n as f64).ln() / n as f64;
        let tv: Vec<ApproxDistance> = [0.0, 4.0, 6.0]
            .iter()
            .map(|&mu| approx_distance(n, theta, mu, 1.0).unwrap())
            .collect();
        assert!(tv[0].tv < tv[1].tv && tv[1].tv < tv[2].tv);
        assert!(tv[2].local_maxima >= 2);
        assert_eq!(tv[0].local_maxima, 1);
        let far = approx_distance(10, 0.5, 10.0, 1.0).unwrap();
        assert!(far.tv > 0.2, "{far:?}");
    }

    #[test]
    fn column_densities_follow_model() {
        use crate::model::{ExponentialEdgeModel, SquareMatrix};
        let m = CommunityModel::new(vec![0.5, 0.5], 10).unwrap();
        let e: EdgeModel = ExponentialEdgeModel::new(SquareMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap())
            .unwrap()
            .into();
        let (a, b) = column_densities(&m, &e, 0, 1).unwrap();
        assert_eq!(a.marginals()[1], Marginal::Gamma { shape: 5.0, rate: 2.0 });
        assert_eq!(b.marginals()[0], Marginal::Gamma { shape: 5.0, rate: 2.0 });
        assert_eq!(b.marginals()[1], Marginal::Gamma { shape: 5.0, rate: 3.0 });
    }

    #[test]
    fn suite_passes() {
        let checks = verification_suite(&spec()).unwrap();
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
    }
}
