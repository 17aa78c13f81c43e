//! Seeded generation of weighted graphs and of per-node edge-sum statistics.
//!
//! Every random draw comes from a [`ChaCha8Rng`] keyed by the caller's seed.
//! Independent trials use separate ChaCha streams (`stream = trial index`),
//! so a trial's output depends only on `(seed, trial)` and never on how
//! trials are scheduled across threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma, Normal};
use serde::Serialize;
use statrs::function::gamma::ln_gamma;
use std::fmt::Write as _;

use crate::error::{invalid, Error, Result};
use crate::model::{CommunityModel, EdgeModel, SquareMatrix};

/// Recorded in output metadata so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng (key = seed via seed_from_u64, stream = trial index)";
pub const DEFAULT_NODE_CAP: usize = 20_000;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A complete weighted graph with planted labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGraphSample {
    labels: Vec<usize>,
    k: usize,
    /// Packed strict upper triangle, row by row.
    upper: Vec<f64>,
    pub seed: u64,
    pub model_kind: &'static str,
}

impl LabeledGraphSample {
    /// Builds a sample from explicit labels and a full symmetric weight matrix.
    pub fn from_parts(labels: Vec<usize>, k: usize, weights: &[Vec<f64>], seed: u64) -> Result<Self> {
        let n = labels.len();
        if weights.len() != n || weights.iter().any(|r| r.len() != n) {
            return Err(invalid("weights", "matrix must be n x n"));
        }
        if labels.iter().any(|&l| l >= k) {
            return Err(invalid("labels", "label out of range"));
        }
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            if weights[u][u] != 0.0 {
                return Err(invalid("weights", "diagonal must be zero"));
            }
            for v in (u + 1)..n {
                if weights[u][v] != weights[v][u] {
                    return Err(Error::Asymmetric {
                        field: "weights",
                        row: u,
                        col: v,
                    });
                }
                upper.push(weights[u][v]);
            }
        }
        Ok(Self {
            labels,
            k,
            upper,
            seed,
            model_kind: "custom",
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    fn index(&self, u: usize, v: usize) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let n = self.n();
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    }

    /// Weight of edge `{u, v}`; zero on the diagonal.
    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        if u == v {
            0.0
        } else {
            self.upper[self.index(u, v)]
        }
    }

    pub fn label_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Edge list with a `# seed=<s> kind=<k>` line and a `u,v,weight` header.
    /// Edges removed by thinning (weight exactly zero) are omitted.
    pub fn to_edge_list_csv(&self) -> String {
        let mut out = format!("# seed={} kind={}\nu,v,weight\n", self.seed, self.model_kind);
        let n = self.n();
        for u in 0..n {
            for v in (u + 1)..n {
                let w = self.weight(u, v);
                if self.model_kind == "thinned_gaussian" && w == 0.0 {
                    continue;
                }
                let _ = writeln!(out, "{u},{v},{w}");
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphOptions {
    /// Shuffle labels instead of assigning them in contiguous blocks.
    pub permute: bool,
    pub node_cap: usize,
}

impl Default for GraphOptions {
    fn default() -> Self {
        Self {
            permute: false,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

/// Single-edge weight distribution `Q_ij`.
#[derive(Debug, Clone, Copy)]
enum EdgeDraw {
    Normal(Normal<f64>),
    Exponential(Gamma<f64>),
    Thinned { keep: f64, normal: Normal<f64> },
}

impl EdgeDraw {
    fn table(model: &CommunityModel, edges: &EdgeModel) -> Result<Vec<EdgeDraw>> {
        let k = model.k();
        let normal = |m: f64, v: f64| {
            Normal::new(m, v.sqrt()).map_err(|e| Error::Numerical(format!("normal({m}, {v}): {e}")))
        };
        let mut table = Vec::with_capacity(k * k);
        let theta = match edges {
            EdgeModel::ThinnedGaussian(t) => Some(t.theta(model.n())?),
            _ => None,
        };
        for i in 0..k {
            for j in 0..k {
                table.push(match edges {
                    EdgeModel::Gaussian(g) => {
                        EdgeDraw::Normal(normal(g.mean().get(i, j), g.variance().get(i, j))?)
                    }
                    EdgeModel::Exponential(e) => EdgeDraw::Exponential(
                        Gamma::new(1.0, 1.0 / e.rate().get(i, j))
                            .map_err(|e| Error::Numerical(e.to_string()))?,
                    ),
                    EdgeModel::ThinnedGaussian(t) => EdgeDraw::Thinned {
                        keep: theta.as_ref().map_or(1.0, |th: &SquareMatrix| th.get(i, j)),
                        normal: normal(t.base().mean().get(i, j), t.base().variance().get(i, j))?,
                    },
                });
            }
        }
        Ok(table)
    }

    #[inline]
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            EdgeDraw::Normal(d) => d.sample(rng),
            EdgeDraw::Exponential(d) => d.sample(rng),
            EdgeDraw::Thinned { keep, normal } => {
                if rng.random::<f64>() < *keep {
                    normal.sample(rng)
                } else {
                    0.0
                }
            }
        }
    }
}

/// Samples a complete weighted graph: every unordered pair `{u, v}` gets one
/// weight from `Q_{label_u, label_v}`.
pub fn sample_graph(model: &CommunityModel, edges: &EdgeModel, seed: u64, opts: GraphOptions) -> Result<LabeledGraphSample> {
    edges.validate_for(model)?;
    let n = model.n();
    if n > opts.node_cap {
        return Err(Error::TooLarge(format!("n = {n} exceeds node cap {}", opts.node_cap)));
    }
    let mut rng = trial_rng(seed, 0);
    let mut labels: Vec<usize> = model
        .sizes()
        .iter()
        .enumerate()
        .flat_map(|(c, &p)| std::iter::repeat(c).take(p))
        .collect();
    if opts.permute {
        labels.shuffle(&mut rng);
    }
    let k = model.k();
    let table = EdgeDraw::table(model, edges)?;
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        let row = labels[u] * k;
        for v in (u + 1)..n {
            upper.push(table[row + labels[v]].draw(&mut rng));
        }
    }
    Ok(LabeledGraphSample {
        labels,
        k,
        upper,
        seed,
        model_kind: edges.kind(),
    })
}

/// Summed incident edge weights of one node, grouped by neighbour community.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeSumVector {
    pub w: Vec<f64>,
    pub node: usize,
    pub truth: usize,
}

pub fn edge_sums(sample: &LabeledGraphSample, node: usize) -> Result<EdgeSumVector> {
    if node >= sample.n() {
        return Err(invalid("node", format!("{node} out of range for n = {}", sample.n())));
    }
    let mut w = vec![0.0; sample.k()];
    for (v, &label) in sample.labels().iter().enumerate() {
        if v != node {
            w[label] += sample.weight(node, v);
        }
    }
    Ok(EdgeSumVector {
        w,
        node,
        truth: sample.labels()[node],
    })
}

/// How many neighbours a coordinate of `W` sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeConvention {
    /// `W_j` sums over `p_j` nodes for every `j`.
    #[default]
    Full,
    /// The node itself is excluded: `p_j - 1` nodes when `j` is its own community.
    ExcludeSelf,
}

/// Law of one coordinate of `W` under one hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoordinateLaw {
    /// Sum over zero neighbours; always exactly zero.
    Empty,
    Normal { mean: f64, var: f64 },
    Gamma { shape: f64, rate: f64 },
    /// Sum of `count` Gaussian weights each kept with probability `keep`.
    Thinned { count: usize, keep: f64, mean: f64, var: f64 },
}

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_7;

#[inline]
pub(crate) fn normal_ln_pdf(x: f64, mean: f64, var: f64) -> f64 {
    -HALF_LN_2PI - 0.5 * var.ln() - (x - mean) * (x - mean) / (2.0 * var)
}

#[inline]
pub(crate) fn gamma_ln_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x < 0.0 {
        return f64::NEG_INFINITY;
    }
    let poly = if shape == 1.0 { 0.0 } else { (shape - 1.0) * x.ln() };
    shape * rate.ln() - ln_gamma(shape) + poly - rate * x
}

impl CoordinateLaw {
    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            CoordinateLaw::Empty => 0.0,
            CoordinateLaw::Normal { mean, var } => mean + var.sqrt() * standard_normal(rng),
            CoordinateLaw::Gamma { shape, rate } => Gamma::new(shape, 1.0 / rate)
                .expect("validated gamma parameters")
                .sample(rng),
            CoordinateLaw::Thinned { count, keep, mean, var } => {
                let kept = Binomial::new(count as u64, keep)
                    .expect("validated binomial parameters")
                    .sample(rng);
                if kept == 0 {
                    0.0
                } else {
                    let m = kept as f64;
                    m * mean + (m * var).sqrt() * standard_normal(rng)
                }
            }
        }
    }

    /// Log-density used for classification. Thinned sums use their Gaussian
    /// moment approximation `N(c keep mean, c keep (var + (1 - keep) mean^2))`.
    pub fn ln_likelihood(&self, x: f64) -> f64 {
        match *self {
            CoordinateLaw::Empty => 0.0,
            CoordinateLaw::Normal { mean, var } => normal_ln_pdf(x, mean, var),
            CoordinateLaw::Gamma { shape, rate } => gamma_ln_pdf(x, shape, rate),
            CoordinateLaw::Thinned { count, keep, mean, var } => {
                let c = count as f64;
                normal_ln_pdf(x, c * keep * mean, c * keep * (var + (1.0 - keep) * mean * mean))
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            CoordinateLaw::Empty => 0.0,
            CoordinateLaw::Normal { mean, .. } => mean,
            CoordinateLaw::Gamma { shape, rate } => shape / rate,
            CoordinateLaw::Thinned { count, keep, mean, .. } => count as f64 * keep * mean,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            CoordinateLaw::Empty => 0.0,
            CoordinateLaw::Normal { var, .. } => var,
            CoordinateLaw::Gamma { shape, rate } => shape / (rate * rate),
            CoordinateLaw::Thinned { count, keep, mean, var } => {
                count as f64 * keep * (var + (1.0 - keep) * mean * mean)
            }
        }
    }
}

#[inline]
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand_distr::StandardNormal)
}

/// Per-hypothesis laws of the edge-sum vector `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSumLaw {
    k: usize,
    /// `laws[h][j]`: coordinate `j` under `H = h`.
    laws: Vec<Vec<CoordinateLaw>>,
}

impl EdgeSumLaw {
    pub fn new(model: &CommunityModel, edges: &EdgeModel, convention: SizeConvention) -> Result<Self> {
        let k = model.k();
        let sizes: Vec<Vec<usize>> = (0..k)
            .map(|h| {
                model
                    .sizes()
                    .iter()
                    .enumerate()
                    .map(|(j, &p)| match convention {
                        SizeConvention::ExcludeSelf if j == h => p - 1,
                        _ => p,
                    })
                    .collect()
            })
            .collect();
        Self::with_sizes(model, edges, &sizes)
    }

    /// Laws with explicit neighbour counts: `sizes[h][j]` nodes of community
    /// `j` contribute to `W_j` under `H = h`.
    pub fn with_sizes(model: &CommunityModel, edges: &EdgeModel, sizes: &[Vec<usize>]) -> Result<Self> {
        edges.validate_for(model)?;
        let k = model.k();
        if sizes.len() != k || sizes.iter().any(|s| s.len() != k) {
            return Err(invalid("sizes", "need a K x K table of neighbour counts"));
        }
        let theta = match edges {
            EdgeModel::ThinnedGaussian(t) => Some(t.theta(model.n())?),
            _ => None,
        };
        let laws = (0..k)
            .map(|h| {
                (0..k)
                    .map(|j| {
                        let count = sizes[h][j];
                        if count == 0 {
                            return CoordinateLaw::Empty;
                        }
                        let c = count as f64;
                        // Q_jh: neighbour in community j, node of interest in h
                        match edges {
                            EdgeModel::Gaussian(g) => CoordinateLaw::Normal {
                                mean: c * g.mean().get(j, h),
                                var: c * g.variance().get(j, h),
                            },
                            EdgeModel::Exponential(e) => CoordinateLaw::Gamma {
                                shape: c,
                                rate: e.rate().get(j, h),
                            },
                            EdgeModel::ThinnedGaussian(t) => CoordinateLaw::Thinned {
                                count,
                                keep: theta.as_ref().expect("thinned theta").get(j, h),
                                mean: t.base().mean().get(j, h),
                                var: t.base().variance().get(j, h),
                            },
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self { k, laws })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn law(&self, hypothesis: usize, coord: usize) -> CoordinateLaw {
        self.laws[hypothesis][coord]
    }

    pub fn laws(&self, hypothesis: usize) -> &[CoordinateLaw] {
        &self.laws[hypothesis]
    }

    pub fn sample<R: Rng + ?Sized>(&self, truth: usize, rng: &mut R) -> Vec<f64> {
        self.laws[truth].iter().map(|law| law.sample(rng)).collect()
    }

    /// `log P(w | H = hypothesis)` (Gaussian approximation for thinned sums).
    pub fn ln_likelihood(&self, hypothesis: usize, w: &[f64]) -> f64 {
        self.laws[hypothesis]
            .iter()
            .zip(w)
            .map(|(law, &x)| law.ln_likelihood(x))
            .sum()
    }
}

/// Draws `W` directly from its per-coordinate laws for `trials` independent
/// nodes of community `truth`, without building a graph. Trial `i` uses
/// stream `i` of the seeded generator; `node` holds the trial index.
pub fn sample_edge_sums_direct(
    model: &CommunityModel,
    edges: &EdgeModel,
    truth: usize,
    trials: usize,
    seed: u64,
    convention: SizeConvention,
) -> Result<impl Iterator<Item = EdgeSumVector>> {
    if truth >= model.k() {
        return Err(invalid("truth", format!("{truth} out of range for K = {}", model.k())));
    }
    let law = EdgeSumLaw::new(model, edges, convention)?;
    Ok((0..trials).map(move |i| {
        let mut rng = trial_rng(seed, i as u64);
        EdgeSumVector {
            w: law.sample(truth, &mut rng),
            node: i,
            truth,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ExponentialEdgeModel, GaussianEdgeModel, ThinnedGaussianEdgeModel};

    fn binary(n: usize, within: f64, between: f64, var: f64) -> (CommunityModel, EdgeModel) {
        (
            CommunityModel::new(vec![0.5, 0.5], n).unwrap(),
            GaussianEdgeModel::planted(2, within, between, var).unwrap().into(),
        )
    }

    #[test]
    fn small_graph_structure() {
        let (m, e) = binary(4, 1.0, 0.0, 1.0);
        let g = sample_graph(&m, &e, 7, GraphOptions::default()).unwrap();
        assert_eq!(g.upper.len(), 6);
        assert_eq!(g.labels(), &[0, 0, 1, 1]);
        for u in 0..4 {
            assert_eq!(g.weight(u, u), 0.0);
            for v in 0..4 {
                assert_eq!(g.weight(u, v), g.weight(v, u));
            }
        }
    }

    #[test]
    fn packed_index_covers_triangle() {
        let (m, e) = binary(9, 1.0, 0.0, 1.0);
        let g = sample_graph(&m, &e, 1, GraphOptions::default()).unwrap();
        let mut seen: Vec<usize> = (0..9)
            .flat_map(|u| ((u + 1)..9).map(move |v| (u, v)))
            .map(|(u, v)| g.index(u, v))
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..36).collect::<Vec<_>>());
    }

    #[test]
    fn same_seed_same_graph() {
        let (m, e) = binary(30, 1.0, 0.0, 1.0);
        let opts = GraphOptions { permute: true, ..Default::default() };
        let a = sample_graph(&m, &e, 99, opts).unwrap();
        let b = sample_graph(&m, &e, 99, opts).unwrap();
        let c = sample_graph(&m, &e, 100, opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_edge_list_csv(), b.to_edge_list_csv());
        assert_ne!(a.upper, c.upper);
        assert_eq!(a.label_counts(), vec![15, 15]);
    }

    #[test]
    fn node_cap_is_enforced() {
        let (m, e) = binary(100, 1.0, 0.0, 1.0);
        let opts = GraphOptions { node_cap: 50, ..Default::default() };
        assert!(matches!(sample_graph(&m, &e, 0, opts), Err(Error::TooLarge(_))));
    }

    #[test]
    fn exponential_weights_are_nonnegative() {
        let m = CommunityModel::new(vec![0.5, 0.5], 60).unwrap();
        let e: EdgeModel = ExponentialEdgeModel::new(SquareMatrix::from_rows(vec![vec![1.0, 3.0], vec![3.0, 0.5]]).unwrap())
            .unwrap()
            .into();
        let g = sample_graph(&m, &e, 3, GraphOptions::default()).unwrap();
        assert!(g.upper.iter().all(|w| *w >= 0.0));
    }

    #[test]
    fn edge_sums_by_hand() {
        let weights = vec![
            vec![0.0, 1.5, -2.0],
            vec![1.5, 0.0, 4.0],
            vec![-2.0, 4.0, 0.0],
        ];
        let g = LabeledGraphSample::from_parts(vec![0, 1, 1], 2, &weights, 0).unwrap();
        assert_eq!(edge_sums(&g, 0).unwrap().w, vec![0.0, -0.5]);
        assert_eq!(edge_sums(&g, 1).unwrap().w, vec![1.5, 4.0]);
        let s = edge_sums(&g, 2).unwrap();
        assert_eq!(s.w, vec![-2.0, 4.0]);
        assert_eq!(s.truth, 1);
        assert!(edge_sums(&g, 3).is_err());
    }

    #[test]
    fn zero_weights_give_zero_sums() {
        let weights = vec![vec![0.0; 4]; 4];
        let g = LabeledGraphSample::from_parts(vec![0, 0, 1, 1], 2, &weights, 0).unwrap();
        for v in 0..4 {
            assert_eq!(edge_sums(&g, v).unwrap().w, vec![0.0, 0.0]);
        }
    }

    #[test]
    fn edge_sums_add_up_to_row_sums() {
        let (m, e) = binary(25, 0.5, -0.2, 2.0);
        let g = sample_graph(&m, &e, 5, GraphOptions { permute: true, ..Default::default() }).unwrap();
        for v in 0..25 {
            let row: f64 = (0..25).map(|u| g.weight(v, u)).sum();
            let s: f64 = edge_sums(&g, v).unwrap().w.iter().sum();
            assert!((row - s).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_has_seed_line_and_header() {
        let (m, e) = binary(4, 1.0, 0.0, 1.0);
        let g = sample_graph(&m, &e, 11, GraphOptions::default()).unwrap();
        let csv = g.to_edge_list_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# seed=11 kind=gaussian"));
        assert_eq!(lines.next(), Some("u,v,weight"));
        assert_eq!(lines.count(), 6);
    }

    #[test]
    fn self_exclusion_shrinks_own_community() {
        let (m, e) = binary(10, 1.0, 0.0, 1.0);
        let full = EdgeSumLaw::new(&m, &e, SizeConvention::Full).unwrap();
        let excl = EdgeSumLaw::new(&m, &e, SizeConvention::ExcludeSelf).unwrap();
        assert_eq!(full.law(0, 0), CoordinateLaw::Normal { mean: 5.0, var: 5.0 });
        assert_eq!(excl.law(0, 0), CoordinateLaw::Normal { mean: 4.0, var: 4.0 });
        assert_eq!(excl.law(0, 1), CoordinateLaw::Normal { mean: 0.0, var: 5.0 });
    }

    #[test]
    fn direct_stream_is_deterministic_and_indexed() {
        let (m, e) = binary(100, 1.0, 0.0, 1.0);
        let a: Vec<_> = sample_edge_sums_direct(&m, &e, 1, 50, 3, SizeConvention::Full).unwrap().collect();
        let b: Vec<_> = sample_edge_sums_direct(&m, &e, 1, 50, 3, SizeConvention::Full).unwrap().collect();
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, s)| s.node == i && s.truth == 1));
        assert!(sample_edge_sums_direct(&m, &e, 2, 1, 3, SizeConvention::Full).is_err());
    }

    #[test]
    fn thinned_law_moments() {
        let m = CommunityModel::new(vec![1.0], 10_000).unwrap();
        let base = GaussianEdgeModel::planted(1, 4.0, 4.0, 1.0).unwrap();
        let t: EdgeModel = ThinnedGaussianEdgeModel::new(base, SquareMatrix::filled(1, 1.0)).unwrap().into();
        let law = EdgeSumLaw::new(&m, &t, SizeConvention::Full).unwrap();
        let c = law.law(0, 0);
        let theta = (10_000f64).ln() / 10_000.0;
        assert!((c.mean() - 10_000.0 * theta * 4.0).abs() < 1e-9);
        assert!((c.variance() - 10_000.0 * theta * (1.0 + (1.0 - theta) * 16.0)).abs() < 1e-9);
    }

    #[test]
    fn log_densities_match_statrs() {
        use statrs::distribution::{Continuous, Gamma as SGamma, Normal as SNormal};
        let n = SNormal::new(1.5, 2.0).unwrap();
        assert!((normal_ln_pdf(0.3, 1.5, 4.0) - n.ln_pdf(0.3)).abs() < 1e-12);
        let g = SGamma::new(3.0, 2.5).unwrap();
        assert!((gamma_ln_pdf(0.7, 3.0, 2.5) - g.ln_pdf(0.7)).abs() < 1e-12);
        let g = SGamma::new(1.0, 2.5).unwrap();
        assert!((gamma_ln_pdf(0.0, 1.0, 2.5) - g.ln_pdf(0.0)).abs() < 1e-12);
    }
}
