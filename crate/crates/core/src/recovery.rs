//! Genie-aided MAP classification of a single node, Monte Carlo estimation of
//! its error rate, an exhaustive full-graph MAP for tiny graphs, and sweeps
//! across the recovery threshold.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::divergence::{min_pairwise_divergence, recovery_predicate, Regime};
use crate::error::{invalid, Error, Result};
use crate::model::{CommunityModel, EdgeModel, GaussianEdgeModel};
use crate::sampler::{
    edge_sums, gamma_ln_pdf, normal_ln_pdf, trial_rng, CoordinateLaw, EdgeSumLaw, EdgeSumVector,
    LabeledGraphSample, SizeConvention, RNG_ALGORITHM,
};
use crate::search::maximize_unit_interval;

/// Trials per parallel work unit. Fixed so that floating-point reductions do
/// not depend on the thread count.
const BLOCK: u64 = 4096;

pub const EXHAUSTIVE_MAX_NODES: usize = 12;
pub const EXHAUSTIVE_MAX_LABELINGS: u64 = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypothesisScore {
    pub community: usize,
    /// `log rho_i + log P(w | H = i)`
    pub log_score: f64,
}

/// Index of the largest score; ties go to the smallest community index.
pub fn argmax_score(scores: &[HypothesisScore]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if s.log_score > scores[best].log_score {
            best = i;
        }
    }
    scores[best].community
}

/// MAP rule over the per-hypothesis laws of `W`.
#[derive(Debug, Clone)]
pub struct MapClassifier {
    law: EdgeSumLaw,
    ln_priors: Vec<f64>,
}

impl MapClassifier {
    pub fn new(model: &CommunityModel, edges: &EdgeModel, convention: SizeConvention) -> Result<Self> {
        Self::from_law(EdgeSumLaw::new(model, edges, convention)?, model.rho())
    }

    pub fn from_law(law: EdgeSumLaw, priors: &[f64]) -> Result<Self> {
        if priors.len() != law.k() {
            return Err(Error::DimensionMismatch {
                field: "priors",
                expected: law.k(),
                found: priors.len(),
            });
        }
        if priors.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(invalid("priors", "must be positive"));
        }
        Ok(Self {
            ln_priors: priors.iter().map(|p| p.ln()).collect(),
            law,
        })
    }

    pub fn law(&self) -> &EdgeSumLaw {
        &self.law
    }

    pub fn scores(&self, w: &[f64]) -> Vec<HypothesisScore> {
        (0..self.law.k())
            .map(|h| HypothesisScore {
                community: h,
                log_score: self.ln_priors[h] + self.law.ln_likelihood(h, w),
            })
            .collect()
    }

    #[inline]
    pub fn classify(&self, w: &[f64]) -> usize {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for h in 0..self.law.k() {
            let s = self.ln_priors[h] + self.law.ln_likelihood(h, w);
            if h == 0 || s > best_score {
                best = h;
                best_score = s;
            }
        }
        best
    }
}

/// MAP decision for one edge-sum vector under the model's stated laws
/// (`p_j` neighbours per coordinate).
pub fn map_classify(w: &EdgeSumVector, model: &CommunityModel, edges: &EdgeModel) -> Result<usize> {
    if w.w.len() != model.k() {
        return Err(Error::DimensionMismatch {
            field: "w",
            expected: model.k(),
            found: w.w.len(),
        });
    }
    Ok(MapClassifier::new(model, edges, SizeConvention::Full)?.classify(&w.w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Draw `W` from its true law and count errors.
    #[default]
    Plain,
    /// Importance sampling towards the pairwise decision boundaries; needed
    /// once the error rate falls far below `1 / trials`.
    Tilted,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Plain => "plain",
            Estimator::Tilted => "tilted",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Estimator::Plain),
            "tilted" => Ok(Estimator::Tilted),
            other => Err(invalid("estimator", format!("unknown estimator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GenieOptions {
    pub convention: SizeConvention,
    pub estimator: Estimator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub trials: u64,
    /// Misclassified trials actually observed (under the proposal law when tilted).
    pub errors: u64,
    pub error_rate: f64,
    /// Monte Carlo standard error of `error_rate`.
    pub se: f64,
    /// `[truth][decision]` counts; the diagonal holds correct decisions.
    pub pairwise_error_matrix: Vec<Vec<u64>>,
    /// Estimated `P(decide k, truth i)`; equals the normalized counts for the
    /// plain estimator.
    pub pairwise_error_rate: Vec<Vec<f64>>,
    pub truth_counts: Vec<u64>,
    /// Smallest pairwise divergence; absent for a single community.
    pub predicted_exponent: Option<f64>,
    /// `-log error_rate`, using one error in place of zero.
    pub empirical_exponent: f64,
    pub zero_errors: bool,
    /// `n * error_rate`, a union-bound surrogate for the probability that
    /// some node is misclassified. Not an asymptotic statement.
    pub union_bound_proxy: f64,
    pub seed: u64,
    pub estimator: Estimator,
    pub convention: SizeConvention,
    pub rng: &'static str,
}

#[derive(Debug, Clone)]
struct Tally {
    errors: u64,
    matrix: Vec<u64>,
    truth: Vec<u64>,
    weight_sum: f64,
    weight_sq: f64,
    weighted: Vec<f64>,
}

impl Tally {
    fn new(k: usize) -> Self {
        Self {
            errors: 0,
            matrix: vec![0; k * k],
            truth: vec![0; k],
            weight_sum: 0.0,
            weight_sq: 0.0,
            weighted: vec![0.0; k * k],
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.errors += other.errors;
        self.weight_sum += other.weight_sum;
        self.weight_sq += other.weight_sq;
        for (a, b) in self.matrix.iter_mut().zip(&other.matrix) {
            *a += b;
        }
        for (a, b) in self.truth.iter_mut().zip(&other.truth) {
            *a += b;
        }
        for (a, b) in self.weighted.iter_mut().zip(&other.weighted) {
            *a += b;
        }
    }
}

fn draw_truth(cumulative: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    cumulative.iter().position(|&c| u < c).unwrap_or(cumulative.len() - 1)
}

fn cumulative(rho: &[f64]) -> Vec<f64> {
    rho.iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Runs trials in fixed blocks in parallel and merges block tallies in order.
fn run_blocks(k: usize, trials: u64, trial: impl Fn(u64, &mut Tally) + Sync) -> Tally {
    let blocks = trials.div_ceil(BLOCK);
    let partial: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut t = Tally::new(k);
            for i in (b * BLOCK)..((b + 1) * BLOCK).min(trials) {
                trial(i, &mut t);
            }
            t
        })
        .collect();
    partial.iter().fold(Tally::new(k), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

/// Estimates the genie-aided per-node error: the truth is drawn from `rho`,
/// `W` from its law under that truth, and the MAP rule is applied. Trial `i`
/// uses stream `i` of the seeded generator.
pub fn genie_error_rate(
    model: &CommunityModel,
    edges: &EdgeModel,
    trials: u64,
    seed: u64,
    opts: GenieOptions,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let k = model.k();
    let classifier = MapClassifier::new(model, edges, opts.convention)?;
    let cum = cumulative(model.rho());

    let tally = match opts.estimator {
        Estimator::Plain => run_blocks(k, trials, |i, t| {
            let mut rng = trial_rng(seed, i);
            let truth = draw_truth(&cum, &mut rng);
            let w = classifier.law().sample(truth, &mut rng);
            let decision = classifier.classify(&w);
            t.truth[truth] += 1;
            t.matrix[truth * k + decision] += 1;
            if decision != truth {
                t.errors += 1;
                t.weight_sum += 1.0;
                t.weight_sq += 1.0;
                t.weighted[truth * k + decision] += 1.0;
            }
        }),
        Estimator::Tilted => {
            let proposals = (0..k)
                .map(|i| Proposal::new(classifier.law(), i))
                .collect::<Result<Vec<_>>>()?;
            run_blocks(k, trials, |i, t| {
                let mut rng = trial_rng(seed, i);
                let truth = draw_truth(&cum, &mut rng);
                let proposal = &proposals[truth];
                let w = proposal.sample(&mut rng);
                let decision = classifier.classify(&w);
                t.truth[truth] += 1;
                t.matrix[truth * k + decision] += 1;
                if decision != truth {
                    let ln_f = classifier.law().ln_likelihood(truth, &w);
                    let weight = (ln_f - proposal.ln_density(&w)).exp();
                    t.errors += 1;
                    t.weight_sum += weight;
                    t.weight_sq += weight * weight;
                    t.weighted[truth * k + decision] += weight;
                }
            })
        }
    };

    let n_trials = trials as f64;
    let error_rate = tally.weight_sum / n_trials;
    let se = if trials > 1 {
        ((tally.weight_sq - n_trials * error_rate * error_rate).max(0.0) / (n_trials * (n_trials - 1.0))).sqrt()
    } else {
        0.0
    };
    let zero_errors = tally.errors == 0;
    let empirical_exponent = if zero_errors || error_rate <= 0.0 {
        n_trials.ln()
    } else {
        -error_rate.ln()
    };
    let predicted_exponent = if k >= 2 {
        Some(min_pairwise_divergence(model, edges)?.value)
    } else {
        None
    };
    Ok(TrialReport {
        trials,
        errors: tally.errors,
        error_rate,
        se,
        pairwise_error_matrix: tally.matrix.chunks(k).map(<[u64]>::to_vec).collect(),
        pairwise_error_rate: tally
            .weighted
            .chunks(k)
            .map(|row| row.iter().map(|x| x / n_trials).collect())
            .collect(),
        truth_counts: tally.truth,
        predicted_exponent,
        empirical_exponent,
        zero_errors,
        union_bound_proxy: model.n() as f64 * error_rate,
        seed,
        estimator: opts.estimator,
        convention: opts.convention,
        rng: RNG_ALGORITHM,
    })
}

/// `ln int f^(1-s) g^s` for one coordinate, in closed form.
fn ln_chernoff_coord(f: &CoordinateLaw, g: &CoordinateLaw, s: f64) -> Result<f64> {
    let a = 1.0 - s;
    Ok(match (*f, *g) {
        (CoordinateLaw::Empty, CoordinateLaw::Empty) => 0.0,
        (CoordinateLaw::Normal { mean: m1, var: v1 }, CoordinateLaw::Normal { mean: m2, var: v2 }) => {
            let precision = a / v1 + s / v2;
            -0.5 * (a * v1.ln() + s * v2.ln() + precision.ln())
                - 0.5 * a * s * (m1 - m2).powi(2) / (a * v2 + s * v1)
        }
        (CoordinateLaw::Gamma { shape: k1, rate: r1 }, CoordinateLaw::Gamma { shape: k2, rate: r2 }) => {
            let shape = a * k1 + s * k2;
            let rate = a * r1 + s * r2;
            ln_gamma(shape) - a * ln_gamma(k1) - s * ln_gamma(k2) + a * k1 * r1.ln() + s * k2 * r2.ln()
                - shape * rate.ln()
        }
        _ => {
            return Err(Error::Unsupported(
                "tilted estimator needs Gaussian or Gamma coordinates of matching kind".into(),
            ))
        }
    })
}

/// Normalized geometric mixture `f^(1-s) g^s` for one coordinate.
fn tilt_coord(f: &CoordinateLaw, g: &CoordinateLaw, s: f64) -> CoordinateLaw {
    let a = 1.0 - s;
    match (*f, *g) {
        (CoordinateLaw::Normal { mean: m1, var: v1 }, CoordinateLaw::Normal { mean: m2, var: v2 }) => {
            let precision = a / v1 + s / v2;
            CoordinateLaw::Normal {
                mean: (a * m1 / v1 + s * m2 / v2) / precision,
                var: 1.0 / precision,
            }
        }
        (CoordinateLaw::Gamma { shape: k1, rate: r1 }, CoordinateLaw::Gamma { shape: k2, rate: r2 }) => {
            CoordinateLaw::Gamma {
                shape: a * k1 + s * k2,
                rate: a * r1 + s * r2,
            }
        }
        _ => CoordinateLaw::Empty,
    }
}

fn exact_ln_pdf(law: &CoordinateLaw, x: f64) -> f64 {
    match *law {
        CoordinateLaw::Empty => 0.0,
        CoordinateLaw::Normal { mean, var } => normal_ln_pdf(x, mean, var),
        CoordinateLaw::Gamma { shape, rate } => gamma_ln_pdf(x, shape, rate),
        CoordinateLaw::Thinned { .. } => f64::NAN,
    }
}

/// Importance proposal for truth `i`: half the true law, half split evenly
/// over the Chernoff-tilted laws towards each rival hypothesis.
#[derive(Debug, Clone)]
struct Proposal {
    components: Vec<Vec<CoordinateLaw>>,
    ln_weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Proposal {
    fn new(law: &EdgeSumLaw, truth: usize) -> Result<Self> {
        let k = law.k();
        let own = law.laws(truth).to_vec();
        if own.iter().any(|c| matches!(c, CoordinateLaw::Thinned { .. })) {
            return Err(Error::Unsupported(
                "tilted estimator is not available for thinned edge sums".into(),
            ));
        }
        let mut components = vec![own.clone()];
        for rival in (0..k).filter(|&r| r != truth) {
            let other = law.laws(rival);
            let ln_integral = |s: f64| -> Result<f64> {
                own.iter().zip(other).map(|(f, g)| ln_chernoff_coord(f, g, s)).sum()
            };
            ln_integral(0.5)?;
            let best = maximize_unit_interval(|s| -ln_integral(s).unwrap_or(f64::NEG_INFINITY), 101, 1e-9);
            components.push(own.iter().zip(other).map(|(f, g)| tilt_coord(f, g, best.arg)).collect());
        }
        let weights: Vec<f64> = if k == 1 {
            vec![1.0]
        } else {
            std::iter::once(0.5)
                .chain(std::iter::repeat(0.5 / (k - 1) as f64).take(k - 1))
                .collect()
        };
        Ok(Self {
            components,
            ln_weights: weights.iter().map(|w| w.ln()).collect(),
            cumulative: cumulative(&weights),
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let c = draw_truth(&self.cumulative, rng);
        self.components[c].iter().map(|law| law.sample(rng)).collect()
    }

    fn ln_density(&self, w: &[f64]) -> f64 {
        let terms: Vec<f64> = self
            .components
            .iter()
            .zip(&self.ln_weights)
            .map(|(comp, lw)| lw + comp.iter().zip(w).map(|(l, &x)| exact_ln_pdf(l, x)).sum::<f64>())
            .collect();
        let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
    }
}

/// Genie decision for one node of a sampled graph: every other label is
/// revealed, and `W_j` sums over the `m_j` other nodes labelled `j`.
pub fn genie_classify_node(
    sample: &LabeledGraphSample,
    node: usize,
    model: &CommunityModel,
    edges: &EdgeModel,
) -> Result<usize> {
    check_sample(sample, model)?;
    let w = edge_sums(sample, node)?;
    let mut counts = sample.label_counts();
    counts[sample.labels()[node]] -= 1;
    let sizes = vec![counts; model.k()];
    let law = EdgeSumLaw::with_sizes(model, edges, &sizes)?;
    Ok(MapClassifier::from_law(law, model.rho())?.classify(&w.w))
}

fn check_sample(sample: &LabeledGraphSample, model: &CommunityModel) -> Result<()> {
    if sample.k() != model.k() {
        return Err(Error::DimensionMismatch {
            field: "K",
            expected: model.k(),
            found: sample.k(),
        });
    }
    if sample.n() != model.n() {
        return Err(Error::DimensionMismatch {
            field: "n",
            expected: model.n(),
            found: sample.n(),
        });
    }
    Ok(())
}

fn edge_ln_likelihood(edges: &EdgeModel, theta: Option<&crate::model::SquareMatrix>, a: usize, b: usize, w: f64) -> f64 {
    match edges {
        EdgeModel::Gaussian(g) => gaussian_edge(g, a, b, w),
        EdgeModel::Exponential(e) => gamma_ln_pdf(w, 1.0, e.rate().get(a, b)),
        EdgeModel::ThinnedGaussian(t) => {
            let keep = theta.expect("thinned theta").get(a, b);
            if w == 0.0 {
                (-keep).ln_1p()
            } else {
                keep.ln() + gaussian_edge(t.base(), a, b, w)
            }
        }
    }
}

fn gaussian_edge(g: &GaussianEdgeModel, a: usize, b: usize, w: f64) -> f64 {
    normal_ln_pdf(w, g.mean().get(a, b), g.variance().get(a, b))
}

fn labeling_count(n: usize, sizes: &[usize], constrained: bool) -> Option<u64> {
    if constrained {
        let mut count: u64 = 1;
        let mut placed = 0u64;
        for &p in sizes {
            for i in 1..=p as u64 {
                placed += 1;
                count = count.checked_mul(placed)? / i;
            }
        }
        Some(count)
    } else {
        (sizes.len() as u64).checked_pow(n as u32)
    }
}

/// Full-graph MAP labelling by enumeration: maximizes the joint
/// log-likelihood of every edge weight plus `sum log rho`. With `constrained`
/// only labellings with the model's exact community sizes are considered.
/// Ties go to the lexicographically smallest labelling.
pub fn exhaustive_map(
    sample: &LabeledGraphSample,
    model: &CommunityModel,
    edges: &EdgeModel,
    constrained: bool,
) -> Result<Vec<usize>> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    enumerate_labelings(sample, model, edges, constrained, |score, labels| {
        if best.as_ref().map_or(true, |(b, _)| score > *b) {
            best = Some((score, labels.to_vec()));
        }
    })?;
    best.map(|(_, labels)| labels)
        .ok_or_else(|| Error::Numerical("no labelling was enumerated".into()))
}

/// Posterior marginals `P(x_v = a | graph)` by enumeration, indexed
/// `[node][community]`, under the same prior as [`exhaustive_map`].
pub fn exhaustive_marginals(
    sample: &LabeledGraphSample,
    model: &CommunityModel,
    edges: &EdgeModel,
    constrained: bool,
) -> Result<Vec<Vec<f64>>> {
    let n = sample.n();
    let k = model.k();
    let mut visited: Vec<(f64, Vec<usize>)> = Vec::new();
    enumerate_labelings(sample, model, edges, constrained, |score, labels| {
        visited.push((score, labels.to_vec()));
    })?;
    let max = visited.iter().map(|(s, _)| *s).fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Numerical("every labelling has zero likelihood".into()));
    }
    let mut marginals = vec![vec![0.0; k]; n];
    let mut total = 0.0;
    for (score, labels) in &visited {
        let w = (score - max).exp();
        total += w;
        for (v, &a) in labels.iter().enumerate() {
            marginals[v][a] += w;
        }
    }
    for row in &mut marginals {
        row.iter_mut().for_each(|m| *m /= total);
    }
    Ok(marginals)
}

/// Visits every admissible labelling in lexicographic order with its joint
/// log-likelihood plus `sum log rho`.
fn enumerate_labelings(
    sample: &LabeledGraphSample,
    model: &CommunityModel,
    edges: &EdgeModel,
    constrained: bool,
    visit: impl FnMut(f64, &[usize]),
) -> Result<()> {
    check_sample(sample, model)?;
    edges.validate_for(model)?;
    let n = sample.n();
    let k = model.k();
    if n > EXHAUSTIVE_MAX_NODES {
        return Err(Error::TooLarge(format!("exhaustive MAP needs n <= {EXHAUSTIVE_MAX_NODES}, got {n}")));
    }
    match labeling_count(n, model.sizes(), constrained) {
        Some(c) if c <= EXHAUSTIVE_MAX_LABELINGS => {}
        _ => {
            return Err(Error::TooLarge(format!(
                "more than {EXHAUSTIVE_MAX_LABELINGS} labellings to enumerate"
            )))
        }
    }

    let theta = match edges {
        EdgeModel::ThinnedGaussian(t) => Some(t.theta(n)?),
        _ => None,
    };
    // table[(u * n + v) * k * k + a * k + b] for u < v
    let mut table = vec![0.0; n * n * k * k];
    for u in 0..n {
        for v in (u + 1)..n {
            let w = sample.weight(u, v);
            for a in 0..k {
                for b in 0..k {
                    table[(u * n + v) * k * k + a * k + b] = edge_ln_likelihood(edges, theta.as_ref(), a, b, w);
                }
            }
        }
    }
    let ln_rho: Vec<f64> = model.rho().iter().map(|r| r.ln()).collect();

    struct Search<'a, F> {
        n: usize,
        k: usize,
        table: &'a [f64],
        ln_rho: &'a [f64],
        remaining: Option<Vec<usize>>,
        labels: Vec<usize>,
        visit: F,
    }

    impl<F: FnMut(f64, &[usize])> Search<'_, F> {
        fn go(&mut self, depth: usize, score: f64) {
            if depth == self.n {
                (self.visit)(score, &self.labels);
                return;
            }
            for a in 0..self.k {
                if let Some(rem) = &self.remaining {
                    if rem[a] == 0 {
                        continue;
                    }
                }
                let mut s = score + self.ln_rho[a];
                for u in 0..depth {
                    s += self.table[(u * self.n + depth) * self.k * self.k + self.labels[u] * self.k + a];
                }
                self.labels.push(a);
                if let Some(rem) = &mut self.remaining {
                    rem[a] -= 1;
                }
                self.go(depth + 1, s);
                if let Some(rem) = &mut self.remaining {
                    rem[a] += 1;
                }
                self.labels.pop();
            }
        }
    }

    let mut search = Search {
        n,
        k,
        table: &table,
        ln_rho: &ln_rho,
        remaining: constrained.then(|| model.sizes().to_vec()),
        labels: Vec::with_capacity(n),
        visit,
    };
    search.go(0, 0.0);
    Ok(())
}

/// One row of a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRow {
    pub c: f64,
    pub error_rate: f64,
    pub se: f64,
    /// Order-log margin `min divergence / log n - 1`.
    pub predicted_margin: f64,
    pub zero_errors: bool,
    pub report: TrialReport,
}

/// Binary symmetric Gaussian family with unit variance, within-community mean
/// `sqrt(8 c log n / n)` and between-community mean 0, so that the minimum
/// divergence equals `c log n` when both communities hold `n / 2` nodes.
pub fn binary_symmetric_family(n: usize) -> impl Fn(f64) -> Result<EdgeModel> {
    move |c: f64| {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(invalid("c", format!("{c} must be a nonnegative number")));
        }
        let gap = (8.0 * c * (n as f64).ln() / n as f64).sqrt();
        Ok(GaussianEdgeModel::planted(2, gap, 0.0, 1.0)?.into())
    }
}

/// Runs [`genie_error_rate`] for each `c`; grid point `idx` uses seed
/// `seed + idx` so rows are independent.
pub fn phase_sweep<F>(
    model: &CommunityModel,
    family: F,
    c_values: &[f64],
    trials: u64,
    seed: u64,
    opts: GenieOptions,
) -> Result<Vec<PhaseRow>>
where
    F: Fn(f64) -> Result<EdgeModel>,
{
    if c_values.is_empty() {
        return Err(invalid("c_values", "at least one value is required"));
    }
    c_values
        .iter()
        .enumerate()
        .map(|(idx, &c)| {
            let edges = family(c)?;
            let report = genie_error_rate(model, &edges, trials, seed.wrapping_add(idx as u64), opts)?;
            let predicted_margin = recovery_predicate(model, &edges, Regime::OrderLog)?.margin;
            Ok(PhaseRow {
                c,
                error_rate: report.error_rate,
                se: report.se,
                predicted_margin,
                zero_errors: report.zero_errors,
                report,
            })
        })
        .collect()
}

/// `c,error_rate,se,predicted_margin,zero_errors` with a header row.
pub fn phase_csv(rows: &[PhaseRow]) -> String {
    let mut out = String::from("c,error_rate,se,predicted_margin,zero_errors\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:e},{:e},{},{}\n",
            r.c, r.error_rate, r.se, r.predicted_margin, r.zero_errors
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ExponentialEdgeModel, SquareMatrix};
    use crate::sampler::{sample_graph, GraphOptions};
    use statrs::function::erf::erfc;

    fn phi(x: f64) -> f64 {
        0.5 * erfc(-x / std::f64::consts::SQRT_2)
    }

    fn binary(n: usize, within: f64, between: f64) -> (CommunityModel, EdgeModel) {
        (
            CommunityModel::new(vec![0.5, 0.5], n).unwrap(),
            GaussianEdgeModel::planted(2, within, between, 1.0).unwrap().into(),
        )
    }

    fn vector(w: Vec<f64>) -> EdgeSumVector {
        EdgeSumVector { w, node: 0, truth: 0 }
    }

    #[test]
    fn own_mean_is_classified_as_own() {
        let (m, e) = binary(100, 0.3, 0.0);
        assert_eq!(map_classify(&vector(vec![15.0, 0.0]), &m, &e).unwrap(), 0);
        assert_eq!(map_classify(&vector(vec![0.0, 15.0]), &m, &e).unwrap(), 1);
    }

    #[test]
    fn ties_go_to_first_community() {
        let (m, e) = binary(100, 0.3, 0.3);
        assert_eq!(map_classify(&vector(vec![1.0, -2.0]), &m, &e).unwrap(), 0);
    }

    #[test]
    fn single_community_always_wins() {
        let m = CommunityModel::new(vec![1.0], 10).unwrap();
        let e: EdgeModel = GaussianEdgeModel::planted(1, 1.0, 1.0, 1.0).unwrap().into();
        for x in [-100.0, 0.0, 7.0] {
            assert_eq!(map_classify(&vector(vec![x]), &m, &e).unwrap(), 0);
        }
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let (m, e) = binary(10, 1.0, 0.0);
        assert!(matches!(
            map_classify(&vector(vec![1.0]), &m, &e),
            Err(Error::DimensionMismatch { field: "w", .. })
        ));
    }

    #[test]
    fn exponential_unit_shape_at_zero_is_finite() {
        let m = CommunityModel::new(vec![0.5, 0.5], 2).unwrap();
        let e: EdgeModel = ExponentialEdgeModel::new(SquareMatrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap())
            .unwrap()
            .into();
        let c = MapClassifier::new(&m, &e, SizeConvention::Full).unwrap();
        assert!(c.scores(&[0.0, 0.0]).iter().all(|s| s.log_score.is_finite()));
    }

    #[test]
    fn scores_agree_with_classify() {
        let m = CommunityModel::new(vec![0.2, 0.3, 0.5], 30).unwrap();
        let mean = SquareMatrix::from_rows(vec![vec![1.0, 0.2, 0.0], vec![0.2, 0.8, 0.1], vec![0.0, 0.1, 0.6]]).unwrap();
        let e: EdgeModel = GaussianEdgeModel::new(mean, SquareMatrix::filled(3, 1.0)).unwrap().into();
        let c = MapClassifier::new(&m, &e, SizeConvention::Full).unwrap();
        let mut rng = trial_rng(5, 0);
        for truth in 0..3 {
            for _ in 0..50 {
                let w = c.law().sample(truth, &mut rng);
                let scores = c.scores(&w);
                let d = c.classify(&w);
                assert_eq!(d, argmax_score(&scores));
                assert!(scores.iter().all(|s| s.log_score <= scores[d].log_score));
                // a common shift leaves the decision unchanged
                let shifted: Vec<_> = scores
                    .iter()
                    .map(|s| HypothesisScore { log_score: s.log_score - 123.4, ..*s })
                    .collect();
                assert_eq!(argmax_score(&shifted), d);
            }
        }
    }

    #[test]
    fn report_is_deterministic_and_consistent() {
        let (m, e) = binary(200, 0.4, 0.0);
        let opts = GenieOptions::default();
        let a = genie_error_rate(&m, &e, 10_000, 42, opts).unwrap();
        let b = genie_error_rate(&m, &e, 10_000, 42, opts).unwrap();
        assert_eq!(a, b);
        assert!(a.errors <= a.trials);
        for (row, &count) in a.pairwise_error_matrix.iter().zip(&a.truth_counts) {
            assert_eq!(row.iter().sum::<u64>(), count);
        }
        assert_eq!(a.truth_counts.iter().sum::<u64>(), a.trials);
        let off: u64 = (0..2).map(|i| a.pairwise_error_matrix[i][1 - i]).sum();
        assert_eq!(off, a.errors);
    }

    #[test]
    fn identical_columns_give_coin_flip_errors() {
        let (m, e) = binary(100, 0.5, 0.5);
        let r = genie_error_rate(&m, &e, 20_000, 1, GenieOptions::default()).unwrap();
        assert!((r.error_rate - 0.5).abs() < 3.0 * r.se, "{}", r.error_rate);
        assert_eq!(r.predicted_exponent, Some(0.0));
    }

    #[test]
    fn huge_separation_gives_no_errors() {
        let (m, e) = binary(100, 2.0, 0.0);
        let r = genie_error_rate(&m, &e, 20_000, 3, GenieOptions::default()).unwrap();
        assert!(r.predicted_exponent.unwrap() > 20.0);
        assert!(r.zero_errors);
        assert!((r.empirical_exponent - (20_000f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn tilted_estimator_matches_closed_form() {
        // symmetric equal-variance case: P_e = Phi(-sqrt(2 * Delta))
        let n = 1000;
        let c = 2.0;
        let m = CommunityModel::new(vec![0.5, 0.5], n).unwrap();
        let e = binary_symmetric_family(n)(c).unwrap();
        let opts = GenieOptions {
            estimator: Estimator::Tilted,
            ..Default::default()
        };
        let r = genie_error_rate(&m, &e, 20_000, 9, opts).unwrap();
        let exact = phi(-(2.0 * c * (n as f64).ln()).sqrt());
        assert!((r.error_rate - exact).abs() < 4.0 * r.se, "{} vs {exact} (se {})", r.error_rate, r.se);
        assert!(r.se < 0.05 * exact);
    }

    #[test]
    fn tilted_and_plain_agree_on_exponential() {
        let m = CommunityModel::new(vec![0.5, 0.5], 20).unwrap();
        let e: EdgeModel = ExponentialEdgeModel::new(SquareMatrix::from_rows(vec![vec![1.0, 1.6], vec![1.6, 1.0]]).unwrap())
            .unwrap()
            .into();
        let plain = genie_error_rate(&m, &e, 50_000, 4, GenieOptions::default()).unwrap();
        let tilted = genie_error_rate(
            &m,
            &e,
            50_000,
            4,
            GenieOptions {
                estimator: Estimator::Tilted,
                ..Default::default()
            },
        )
        .unwrap();
        let tol = 4.0 * (plain.se.powi(2) + tilted.se.powi(2)).sqrt();
        assert!((plain.error_rate - tilted.error_rate).abs() < tol);
    }

    #[test]
    fn tilted_rejects_thinned_models() {
        use crate::model::ThinnedGaussianEdgeModel;
        let m = CommunityModel::new(vec![0.5, 0.5], 100).unwrap();
        let base = GaussianEdgeModel::planted(2, 1.0, 0.0, 1.0).unwrap();
        let e: EdgeModel = ThinnedGaussianEdgeModel::new(base, SquareMatrix::filled(2, 1.0)).unwrap().into();
        let opts = GenieOptions {
            estimator: Estimator::Tilted,
            ..Default::default()
        };
        assert!(matches!(genie_error_rate(&m, &e, 10, 0, opts), Err(Error::Unsupported(_))));
        assert!(genie_error_rate(&m, &e, 1000, 0, GenieOptions::default()).is_ok());
    }

    #[test]
    fn chernoff_coordinate_matches_divergence_module() {
        use crate::divergence::gaussian_exponent;
        let f = CoordinateLaw::Normal { mean: 0.3, var: 1.2 };
        let g = CoordinateLaw::Normal { mean: -1.0, var: 0.7 };
        for s in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let here = ln_chernoff_coord(&f, &g, s).unwrap();
            // int f_a^t f_b^(1-t) with a = g, t = s
            let there = gaussian_exponent(&[-1.0], &[0.3], &[0.7], &[1.2], s).unwrap();
            assert!((here + there).abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn exhaustive_flat_objective_is_lexicographic() {
        let (m, e) = binary(6, 0.0, 0.0);
        let g = sample_graph(&m, &e, 2, GraphOptions::default()).unwrap();
        assert_eq!(exhaustive_map(&g, &m, &e, true).unwrap(), vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(exhaustive_map(&g, &m, &e, false).unwrap().len(), 6);
    }

    #[test]
    fn exhaustive_recovers_well_separated_labels() {
        let m = CommunityModel::new(vec![0.5, 0.5], 6).unwrap();
        let e: EdgeModel = GaussianEdgeModel::new(
            SquareMatrix::from_rows(vec![vec![5.0, 0.0], vec![0.0, 3.0]]).unwrap(),
            SquareMatrix::filled(2, 1e-4),
        )
        .unwrap()
        .into();
        let opts = GraphOptions { permute: true, ..Default::default() };
        for seed in 0..5 {
            let g = sample_graph(&m, &e, seed, opts).unwrap();
            assert_eq!(exhaustive_map(&g, &m, &e, true).unwrap(), g.labels());
            assert_eq!(exhaustive_map(&g, &m, &e, false).unwrap(), g.labels());
            for v in 0..6 {
                assert_eq!(genie_classify_node(&g, v, &m, &e).unwrap(), g.labels()[v]);
            }
        }
    }

    #[test]
    fn exhaustive_size_limits() {
        let (m, e) = binary(14, 1.0, 0.0);
        let g = sample_graph(&m, &e, 0, GraphOptions::default()).unwrap();
        assert!(matches!(exhaustive_map(&g, &m, &e, true), Err(Error::TooLarge(_))));
        assert_eq!(labeling_count(8, &[4, 4], true), Some(70));
        assert_eq!(labeling_count(12, &[4, 4, 4], true), Some(34_650));
        assert_eq!(labeling_count(12, &[4, 4, 4], false), Some(531_441));
    }

    #[test]
    fn sweep_margins_and_csv() {
        let n = 1000;
        let m = CommunityModel::new(vec![0.5, 0.5], n).unwrap();
        let rows = phase_sweep(&m, binary_symmetric_family(n), &[0.0, 0.5, 1.0, 2.0], 2000, 5, GenieOptions::default()).unwrap();
        for (row, c) in rows.iter().zip([0.0, 0.5, 1.0, 2.0]) {
            assert!((row.predicted_margin - (c - 1.0)).abs() < 1e-9);
        }
        let csv = phase_csv(&rows);
        assert!(csv.starts_with("c,error_rate,se,predicted_margin,zero_errors\n"));
        assert_eq!(csv.lines().count(), 5);
        assert!(binary_symmetric_family(n)(-1.0).is_err());
    }
}
