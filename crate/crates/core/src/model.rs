//! Community structure and edge-weight distribution parameters.
//!
//! A node in community `i` connects to a node in community `j` through an
//! edge whose weight is drawn from `Q_ij`. The matrices here hold the
//! parameters of `Q`; the aggregated forms scale them by community sizes so
//! that column `j` parameterizes the edge-sum statistic of a node under the
//! hypothesis that it belongs to community `j`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const RHO_SUM_TOL: f64 = 1e-12;

/// Dense square matrix stored row-major. Serialized as an array of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(invalid("matrix", "matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    field: "matrix row",
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn filled(dim: usize, value: f64) -> Self {
        Self {
            dim,
            data: vec![value; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.dim).map(|row| self.get(row, col)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    /// First off-diagonal position violating symmetry, if any.
    fn asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let (a, b) = (self.get(i, j), self.get(j, i));
                let scale = 1f64.max(a.abs()).max(b.abs());
                if !((a - b).abs() <= SYMMETRY_TOL * scale) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn check(&self, field: &'static str, dim: Option<usize>, positive: bool) -> Result<()> {
        if let Some(expected) = dim {
            if self.dim != expected {
                return Err(Error::DimensionMismatch {
                    field,
                    expected,
                    found: self.dim,
                });
            }
        }
        if let Some(bad) = self.data.iter().find(|v| !v.is_finite()) {
            return Err(invalid(field, format!("non-finite entry {bad}")));
        }
        if positive {
            if let Some(bad) = self.data.iter().find(|v| **v <= 0.0) {
                return Err(invalid(field, format!("entries must be > 0, found {bad}")));
            }
        }
        if let Some((row, col)) = self.asymmetry() {
            return Err(Error::Asymmetric { field, row, col });
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<f64>>> for SquareMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<SquareMatrix> for Vec<Vec<f64>> {
    fn from(m: SquareMatrix) -> Self {
        m.rows()
    }
}

/// Number of communities, their proportions and the resulting sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityModel {
    rho: Vec<f64>,
    n: usize,
    sizes: Vec<usize>,
}

impl CommunityModel {
    /// Sizes follow `p_i = floor(rho_i * n)` for every community but the last,
    /// which takes the remainder so that the sizes partition `n`.
    pub fn new(rho: Vec<f64>, n: usize) -> Result<Self> {
        let k = rho.len();
        if k == 0 {
            return Err(invalid("rho", "at least one community is required"));
        }
        if rho.iter().any(|r| !r.is_finite() || *r <= 0.0 || *r > 1.0) {
            return Err(invalid("rho", "every proportion must lie in (0, 1]"));
        }
        if k > 1 && rho.iter().any(|r| *r >= 1.0) {
            return Err(invalid("rho", "proportions must lie in (0, 1) when K > 1"));
        }
        let total: f64 = rho.iter().sum();
        if (total - 1.0).abs() > RHO_SUM_TOL {
            return Err(invalid("rho", format!("proportions sum to {total}, not 1")));
        }
        if n < k {
            return Err(invalid("n", format!("n = {n} is smaller than K = {k}")));
        }
        // the 1e-9 nudge keeps e.g. 0.29 * 100 from flooring to 28
        let mut sizes: Vec<usize> = rho
            .iter()
            .map(|r| (r * n as f64 + 1e-9).floor() as usize)
            .collect();
        if let Some(i) = sizes.iter().position(|&p| p == 0) {
            return Err(invalid(
                "n",
                format!("community {i} is empty after rounding (n = {n} too small)"),
            ));
        }
        let assigned: usize = sizes[..k - 1].iter().sum();
        sizes[k - 1] = n - assigned;
        Ok(Self { rho, n, sizes })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn log_n(&self) -> f64 {
        (self.n as f64).ln()
    }
}

/// `Q_ij = N(mean_ij, variance_ij)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussianEdgeModel {
    mean: SquareMatrix,
    variance: SquareMatrix,
}

impl GaussianEdgeModel {
    pub fn new(mean: SquareMatrix, variance: SquareMatrix) -> Result<Self> {
        mean.check("mu_bar", None, false)?;
        variance.check("sigma_bar_sq", Some(mean.dim()), true)?;
        Ok(Self { mean, variance })
    }

    /// Equal mean `within` on the diagonal, `between` elsewhere, common variance.
    pub fn planted(k: usize, within: f64, between: f64, variance: f64) -> Result<Self> {
        let mean = SquareMatrix::from_fn(k, |i, j| if i == j { within } else { between });
        Self::new(mean, SquareMatrix::filled(k, variance))
    }

    pub fn dim(&self) -> usize {
        self.mean.dim()
    }

    pub fn mean(&self) -> &SquareMatrix {
        &self.mean
    }

    pub fn variance(&self) -> &SquareMatrix {
        &self.variance
    }
}

/// `Q_ij = Exp(rate_ij)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentialEdgeModel {
    rate: SquareMatrix,
}

impl ExponentialEdgeModel {
    pub fn new(rate: SquareMatrix) -> Result<Self> {
        rate.check("lambda", None, true)?;
        Ok(Self { rate })
    }

    pub fn dim(&self) -> usize {
        self.rate.dim()
    }

    pub fn rate(&self) -> &SquareMatrix {
        &self.rate
    }
}

/// Gaussian weights where each edge survives independently with probability
/// `theta_ij = c_ij log(n) / n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnedGaussianEdgeModel {
    base: GaussianEdgeModel,
    c: SquareMatrix,
}

impl ThinnedGaussianEdgeModel {
    pub fn new(base: GaussianEdgeModel, c: SquareMatrix) -> Result<Self> {
        c.check("c", Some(base.dim()), true)?;
        Ok(Self { base, c })
    }

    pub fn base(&self) -> &GaussianEdgeModel {
        &self.base
    }

    pub fn c(&self) -> &SquareMatrix {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Survival probabilities for a graph on `n` nodes; each must lie in (0, 1).
    pub fn theta(&self, n: usize) -> Result<SquareMatrix> {
        let scale = (n as f64).ln() / n as f64;
        let theta = SquareMatrix::from_fn(self.dim(), |i, j| self.c.get(i, j) * scale);
        if let Some(bad) = theta.values().iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return Err(invalid(
                "c",
                format!("theta = c log(n)/n = {bad} is outside (0, 1) for n = {n}"),
            ));
        }
        Ok(theta)
    }
}

/// Any of the supported edge-weight families.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeModel {
    Gaussian(GaussianEdgeModel),
    Exponential(ExponentialEdgeModel),
    ThinnedGaussian(ThinnedGaussianEdgeModel),
}

impl EdgeModel {
    pub fn dim(&self) -> usize {
        match self {
            EdgeModel::Gaussian(g) => g.dim(),
            EdgeModel::Exponential(e) => e.dim(),
            EdgeModel::ThinnedGaussian(t) => t.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EdgeModel::Gaussian(_) => "gaussian",
            EdgeModel::Exponential(_) => "exponential",
            EdgeModel::ThinnedGaussian(_) => "thinned_gaussian",
        }
    }

    /// Checks the edge model against a community model for the same `K`
    /// (and, for thinning, a valid `theta` at that `n`).
    pub fn validate_for(&self, model: &CommunityModel) -> Result<()> {
        if self.dim() != model.k() {
            return Err(Error::DimensionMismatch {
                field: "edge model",
                expected: model.k(),
                found: self.dim(),
            });
        }
        if let EdgeModel::ThinnedGaussian(t) = self {
            t.theta(model.n())?;
        }
        Ok(())
    }
}

impl From<GaussianEdgeModel> for EdgeModel {
    fn from(g: GaussianEdgeModel) -> Self {
        EdgeModel::Gaussian(g)
    }
}

impl From<ExponentialEdgeModel> for EdgeModel {
    fn from(e: ExponentialEdgeModel) -> Self {
        EdgeModel::Exponential(e)
    }
}

impl From<ThinnedGaussianEdgeModel> for EdgeModel {
    fn from(t: ThinnedGaussianEdgeModel) -> Self {
        EdgeModel::ThinnedGaussian(t)
    }
}

/// Edge-sum means and variances: column `j` holds the law of `W` under `H = j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregatedGaussianParams {
    pub mean: SquareMatrix,
    pub variance: SquareMatrix,
}

impl AggregatedGaussianParams {
    pub fn k(&self) -> usize {
        self.mean.dim()
    }

    pub fn mean_column(&self, j: usize) -> Vec<f64> {
        self.mean.column(j)
    }

    pub fn variance_column(&self, j: usize) -> Vec<f64> {
        self.variance.column(j)
    }
}

/// `mu_ij = p_i mean_ij`, `Sigma_ij = p_i variance_ij`.
pub fn aggregate_gaussian(
    model: &CommunityModel,
    edges: &GaussianEdgeModel,
) -> Result<AggregatedGaussianParams> {
    check_dim(model, edges.dim())?;
    let p = model.sizes();
    Ok(AggregatedGaussianParams {
        mean: SquareMatrix::from_fn(model.k(), |i, j| p[i] as f64 * edges.mean().get(i, j)),
        variance: SquareMatrix::from_fn(model.k(), |i, j| {
            p[i] as f64 * edges.variance().get(i, j)
        }),
    })
}

/// Gaussian moments of the thinned edge sums:
/// `mu_ij = p_i mean_ij theta_ij` and
/// `Sigma_ij = p_i theta_ij (variance_ij + (1 - theta_ij) mean_ij^2)`.
pub fn aggregate_thinned_gaussian(
    model: &CommunityModel,
    edges: &ThinnedGaussianEdgeModel,
) -> Result<AggregatedGaussianParams> {
    check_dim(model, edges.dim())?;
    let theta = edges.theta(model.n())?;
    aggregate_with_survival(model, edges.base(), &theta)
}

/// Same moments with an explicit survival matrix; entries must lie in (0, 1].
/// With `theta = 1` everywhere this reproduces [`aggregate_gaussian`] exactly.
pub fn aggregate_with_survival(
    model: &CommunityModel,
    base: &GaussianEdgeModel,
    theta: &SquareMatrix,
) -> Result<AggregatedGaussianParams> {
    check_dim(model, base.dim())?;
    check_dim(model, theta.dim())?;
    if theta.values().iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
        return Err(invalid("theta", "survival probabilities must lie in (0, 1]"));
    }
    let p = model.sizes();
    let mean = SquareMatrix::from_fn(model.k(), |i, j| {
        p[i] as f64 * base.mean().get(i, j) * theta.get(i, j)
    });
    let variance = SquareMatrix::from_fn(model.k(), |i, j| {
        let (m, v, t) = (base.mean().get(i, j), base.variance().get(i, j), theta.get(i, j));
        p[i] as f64 * t * (v + (1.0 - t) * m * m)
    });
    Ok(AggregatedGaussianParams { mean, variance })
}

fn check_dim(model: &CommunityModel, dim: usize) -> Result<()> {
    if dim != model.k() {
        return Err(Error::DimensionMismatch {
            field: "edge model",
            expected: model.k(),
            found: dim,
        });
    }
    Ok(())
}

/// On-disk model description.
///
/// ```json
/// { "kind": "gaussian", "K": 2, "rho": [0.5, 0.5], "n": 1000,
///   "mu_bar": [[1, 0], [0, 1]], "sigma_bar_sq": [[1, 1], [1, 1]] }
/// ```
///
/// `exponential` models carry `lambda`; `thinned_gaussian` models carry
/// `mu_bar`, `sigma_bar_sq` and `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: ModelKind,
    #[serde(rename = "K")]
    pub k: usize,
    pub rho: Vec<f64>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_bar: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_bar_sq: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Gaussian,
    Exponential,
    ThinnedGaussian,
}

/// A validated community model together with its edge model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSpec {
    pub community: CommunityModel,
    pub edges: EdgeModel,
}

impl ModelFile {
    /// Parses a model file; errors name the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                invalid("model file", inner.to_string())
            } else {
                invalid("model file", format!("at `{path}`: {inner}"))
            }
        })
    }

    pub fn into_spec(self) -> Result<ModelSpec> {
        if self.rho.len() != self.k {
            return Err(Error::DimensionMismatch {
                field: "rho",
                expected: self.k,
                found: self.rho.len(),
            });
        }
        let community = CommunityModel::new(self.rho, self.n)?;
        let matrix = |field: &'static str, rows: Option<Vec<Vec<f64>>>| -> Result<SquareMatrix> {
            let rows = rows.ok_or_else(|| invalid(field, "missing for this model kind"))?;
            let m = SquareMatrix::from_rows(rows).map_err(|e| match e {
                Error::InvalidParameter { reason, .. } => invalid(field, reason),
                Error::DimensionMismatch { expected, found, .. } => Error::DimensionMismatch {
                    field,
                    expected,
                    found,
                },
                other => other,
            })?;
            if m.dim() != self.k {
                return Err(Error::DimensionMismatch {
                    field,
                    expected: self.k,
                    found: m.dim(),
                });
            }
            Ok(m)
        };
        let edges = match self.kind {
            ModelKind::Gaussian => EdgeModel::Gaussian(GaussianEdgeModel::new(
                matrix("mu_bar", self.mu_bar)?,
                matrix("sigma_bar_sq", self.sigma_bar_sq)?,
            )?),
            ModelKind::Exponential => {
                EdgeModel::Exponential(ExponentialEdgeModel::new(matrix("lambda", self.lambda)?)?)
            }
            ModelKind::ThinnedGaussian => {
                let base = GaussianEdgeModel::new(
                    matrix("mu_bar", self.mu_bar)?,
                    matrix("sigma_bar_sq", self.sigma_bar_sq)?,
                )?;
                EdgeModel::ThinnedGaussian(ThinnedGaussianEdgeModel::new(
                    base,
                    matrix("c", self.c)?,
                )?)
            }
        };
        edges.validate_for(&community)?;
        Ok(ModelSpec { community, edges })
    }
}

impl ModelSpec {
    pub fn to_file(&self) -> ModelFile {
        let c = &self.community;
        let mut file = ModelFile {
            kind: ModelKind::Gaussian,
            k: c.k(),
            rho: c.rho().to_vec(),
            n: c.n(),
            mu_bar: None,
            sigma_bar_sq: None,
            lambda: None,
            c: None,
        };
        match &self.edges {
            EdgeModel::Gaussian(g) => {
                file.mu_bar = Some(g.mean().rows());
                file.sigma_bar_sq = Some(g.variance().rows());
            }
            EdgeModel::Exponential(e) => {
                file.kind = ModelKind::Exponential;
                file.lambda = Some(e.rate().rows());
            }
            EdgeModel::ThinnedGaussian(t) => {
                file.kind = ModelKind::ThinnedGaussian;
                file.mu_bar = Some(t.base().mean().rows());
                file.sigma_bar_sq = Some(t.base().variance().rows());
                file.c = Some(t.c().rows());
            }
        }
        file
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn halves_split_exactly() {
        let m = CommunityModel::new(vec![0.5, 0.5], 100).unwrap();
        assert_eq!(m.sizes(), &[50, 50]);
    }

    #[test]
    fn remainder_goes_to_last_community() {
        let third = 1.0 / 3.0;
        let m = CommunityModel::new(vec![third, third, third], 10).unwrap();
        assert_eq!(m.sizes(), &[3, 3, 4]);
    }

    #[test]
    fn floor_is_not_fooled_by_representation_error() {
        let m = CommunityModel::new(vec![0.29, 0.71], 100).unwrap();
        assert_eq!(m.sizes(), &[29, 71]);
    }

    #[test]
    fn empty_community_is_rejected() {
        let err = CommunityModel::new(vec![0.9, 0.1], 5).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "n", .. }), "{err}");
    }

    #[test]
    fn bad_proportions_are_rejected() {
        assert!(CommunityModel::new(vec![0.5, 0.6], 100).is_err());
        assert!(CommunityModel::new(vec![1.0, 0.0], 100).is_err());
        assert!(CommunityModel::new(vec![], 100).is_err());
        assert!(CommunityModel::new(vec![0.5, 0.5], 1).is_err());
    }

    #[test]
    fn single_community_is_allowed() {
        let m = CommunityModel::new(vec![1.0], 7).unwrap();
        assert_eq!(m.sizes(), &[7]);
    }

    #[test]
    fn asymmetric_and_nonpositive_matrices_are_rejected() {
        let mean = SquareMatrix::from_rows(vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        let err = GaussianEdgeModel::new(mean, SquareMatrix::filled(2, 1.0)).unwrap_err();
        assert!(matches!(err, Error::Asymmetric { row: 0, col: 1, .. }));

        let mean = SquareMatrix::filled(2, 5.0);
        assert!(GaussianEdgeModel::new(mean, SquareMatrix::filled(2, 0.0)).is_err());
        assert!(ExponentialEdgeModel::new(SquareMatrix::filled(2, -1.0)).is_err());
    }

    #[test]
    fn aggregate_scales_rows_by_size() {
        let m = CommunityModel::new(vec![0.5, 0.5], 100).unwrap();
        let g = GaussianEdgeModel::planted(2, 1.0, 0.0, 1.0).unwrap();
        let agg = aggregate_gaussian(&m, &g).unwrap();
        assert_eq!(agg.mean.rows(), vec![vec![50.0, 0.0], vec![0.0, 50.0]]);
        assert_eq!(agg.variance.rows(), vec![vec![50.0, 50.0], vec![50.0, 50.0]]);

        let m = CommunityModel::new(vec![3.0 / 7.0, 4.0 / 7.0], 7).unwrap();
        assert_eq!(m.sizes(), &[3, 4]);
        let g = GaussianEdgeModel::planted(2, 2.0, 2.0, 1.0).unwrap();
        let agg = aggregate_gaussian(&m, &g).unwrap();
        assert_eq!(agg.mean.rows(), vec![vec![6.0, 6.0], vec![8.0, 8.0]]);
    }

    #[test]
    fn aggregate_rejects_dimension_mismatch() {
        let m = CommunityModel::new(vec![0.5, 0.5], 100).unwrap();
        let g = GaussianEdgeModel::planted(3, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            aggregate_gaussian(&m, &g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn thinned_moments_match_hand_arithmetic() {
        let m = CommunityModel::new(vec![1.0], 10_000).unwrap();
        let base = GaussianEdgeModel::planted(1, 4.0, 4.0, 1.0).unwrap();
        let t = ThinnedGaussianEdgeModel::new(base, SquareMatrix::filled(1, 1.0)).unwrap();
        let agg = aggregate_thinned_gaussian(&m, &t).unwrap();
        let theta = (10_000f64).ln() / 10_000.0;
        let mu = 10_000.0 * 4.0 * theta;
        let var = 10_000.0 * theta * (1.0 + (1.0 - theta) * 16.0);
        assert!((agg.mean.get(0, 0) - mu).abs() < 1e-9);
        assert!((agg.variance.get(0, 0) - var).abs() < 1e-9);
        assert!((agg.mean.get(0, 0) - 36.84).abs() < 0.01);
        // 156.6 is the rounded figure with (1 - theta) dropped; exact is 156.44
        assert!((agg.variance.get(0, 0) - 156.6).abs() < 0.25);
    }

    #[test]
    fn zero_mean_thinning_scales_variance_only() {
        let m = CommunityModel::new(vec![0.5, 0.5], 1000).unwrap();
        let base = GaussianEdgeModel::planted(2, 0.0, 0.0, 2.0).unwrap();
        let t = ThinnedGaussianEdgeModel::new(base, SquareMatrix::filled(2, 3.0)).unwrap();
        let theta = 3.0 * (1000f64).ln() / 1000.0;
        let agg = aggregate_thinned_gaussian(&m, &t).unwrap();
        for &v in agg.mean.values() {
            assert_eq!(v, 0.0);
        }
        for &v in agg.variance.values() {
            assert!((v - 500.0 * theta * 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_out_of_range_is_rejected() {
        let m = CommunityModel::new(vec![0.5, 0.5], 10).unwrap();
        let base = GaussianEdgeModel::planted(2, 1.0, 0.0, 1.0).unwrap();
        let t = ThinnedGaussianEdgeModel::new(base, SquareMatrix::filled(2, 10.0)).unwrap();
        assert!(aggregate_thinned_gaussian(&m, &t).is_err());
    }

    #[test]
    fn model_file_round_trip_and_field_errors() {
        let text = r#"{"kind":"gaussian","K":2,"rho":[0.5,0.5],"n":100,
            "mu_bar":[[1,0],[0,1]],"sigma_bar_sq":[[1,1],[1,1]]}"#;
        let spec = ModelFile::from_json(text).unwrap().into_spec().unwrap();
        assert_eq!(spec.community.sizes(), &[50, 50]);
        let again = spec.to_file().into_spec().unwrap();
        assert_eq!(again, spec);

        let missing = r#"{"kind":"exponential","K":2,"rho":[0.5,0.5],"n":100}"#;
        let err = ModelFile::from_json(missing).unwrap().into_spec().unwrap_err();
        assert!(err.to_string().contains("lambda"), "{err}");

        let err = ModelFile::from_json(r#"{"kind":"gaussian","K":2,"n":4}"#).unwrap_err();
        assert!(err.to_string().contains("rho"), "{err}");

        let err = ModelFile::from_json(r#"{"kind":"gaussian","K":2,"rho":[0.5,"x"],"n":4}"#).unwrap_err();
        assert!(err.to_string().contains("rho[1]"), "{err}");
    }

    proptest! {
        #[test]
        fn sizes_partition_n(weights in prop::collection::vec(0.05f64..1.0, 1..6), extra in 0usize..1000) {
            let total: f64 = weights.iter().sum();
            let mut rho: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let k = rho.len();
            // renormalize the last entry so the sum is 1 to machine precision
            let head: f64 = rho[..k - 1].iter().sum();
            rho[k - 1] = 1.0 - head;
            let n = k + extra;
            match CommunityModel::new(rho.clone(), n) {
                Ok(m) => {
                    prop_assert_eq!(m.sizes().iter().sum::<usize>(), n);
                    prop_assert!(m.sizes().iter().all(|&p| p >= 1));
                }
                Err(e) => {
                    // only legitimate failure is an empty community
                    let empty = rho.iter().any(|r| (r * n as f64 + 1e-9).floor() < 1.0);
                    prop_assert!(empty || rho.iter().any(|r| *r >= 1.0 && k > 1), "{}", e);
                }
            }
        }

        #[test]
        fn unit_survival_reproduces_plain_aggregation(
            mean in prop::collection::vec(-10.0f64..10.0, 4),
            var in prop::collection::vec(0.01f64..10.0, 4),
            n in 4usize..500,
        ) {
            let sym = |v: &[f64]| SquareMatrix::from_rows(vec![vec![v[0], v[1]], vec![v[1], v[3]]]).unwrap();
            let g = GaussianEdgeModel::new(sym(&mean), sym(&var)).unwrap();
            let m = CommunityModel::new(vec![0.5, 0.5], n).unwrap();
            let plain = aggregate_gaussian(&m, &g).unwrap();
            let thinned = aggregate_with_survival(&m, &g, &SquareMatrix::filled(2, 1.0)).unwrap();
            prop_assert_eq!(plain.mean.values(), thinned.mean.values());
            prop_assert_eq!(plain.variance.values(), thinned.variance.values());
            prop_assert!(thinned.variance.values().iter().all(|v| *v > 0.0));
        }
    }
}
