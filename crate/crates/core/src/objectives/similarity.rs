use nalgebra::DMatrix;
use rand::seq::index;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::{ElementId, ElementSet, Error, Objective, ObjectiveOracle, Result};

/// Largest set the log-det objective will factorize.
pub const LOGDET_MAX_SET: usize = 512;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A dense, symmetric, entrywise non-negative similarity matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("similarity matrix is empty".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let m = Self { n, entries };
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) is {v}")));
                }
                if (v - m.get(j, i)).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { n, entries }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }
}

/// `M_ij = exp(-lambda * ||v_i - v_j||)`.
pub fn similarity_from_features(features: &[Vec<f64>], lambda: f64) -> Result<SimilarityMatrix> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be >= 0, got {lambda}")));
    }
    let Some(first) = features.first() else {
        return Err(Error::InvalidInput("no feature vectors".into()));
    };
    let dim = first.len();
    if let Some((i, v)) = features.iter().enumerate().find(|(_, v)| v.len() != dim) {
        return Err(Error::InvalidInput(format!(
            "feature vector {i} has dimension {}, expected {dim}",
            v.len()
        )));
    }
    let n = features.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0;
        for j in i + 1..n {
            let dist = features[i]
                .iter()
                .zip(&features[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let s = (-lambda * dist).exp();
            entries[i * n + j] = s;
            entries[j * n + i] = s;
        }
    }
    Ok(SimilarityMatrix { n, entries })
}

/// `f(S) = sum_{i in S} sum_j M_ij - sum_{i in S} sum_{j in S} M_ij`.
#[derive(Clone, Debug)]
pub struct CoverageMinusDispersion {
    matrix: SimilarityMatrix,
    row_sums: Vec<f64>,
}

impl CoverageMinusDispersion {
    pub fn new(matrix: SimilarityMatrix) -> Self {
        let row_sums = (0..matrix.len()).map(|i| matrix.row(i).iter().sum()).collect();
        Self { matrix, row_sums }
    }
}

impl Objective for CoverageMinusDispersion {
    fn ground_size(&self) -> usize {
        self.matrix.len()
    }

    fn is_monotone(&self) -> bool {
        false
    }

    fn value(&self, set: &ElementSet) -> Result<f64> {
        let mut total = 0.0;
        for i in set.iter() {
            total += self.row_sums[i];
            for j in set.iter() {
                total -= self.matrix.get(i, j);
            }
        }
        // Exact arithmetic gives >= 0; clear the rounding residue.
        Ok(total.max(0.0))
    }

    fn gain(&self, u: ElementId, set: &ElementSet) -> Result<f64> {
        let inside: f64 = set.iter().map(|j| self.matrix.get(u, j)).sum();
        Ok(self.row_sums[u] - self.matrix.get(u, u) - 2.0 * inside)
    }

    fn name(&self) -> &str {
        "coverage-minus-dispersion"
    }
}

pub fn make_coverage_minus_dispersion(matrix: SimilarityMatrix) -> ObjectiveOracle {
    ObjectiveOracle::new(CoverageMinusDispersion::new(matrix))
}

/// Row sampling for the facility-location estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReservoirConfig {
    pub r_cap: usize,
    pub seed: u64,
}

/// `f(S) = (1/n) sum_i max_{j in S} M_ij`, optionally over a sample of rows.
#[derive(Clone, Debug)]
pub struct FacilityLocation {
    matrix: SimilarityMatrix,
    rows: Vec<usize>,
}

impl FacilityLocation {
    pub fn new(matrix: SimilarityMatrix, estimator: Option<ReservoirConfig>) -> Result<Self> {
        let n = matrix.len();
        let rows = match estimator {
            None => (0..n).collect(),
            Some(cfg) => {
                if cfg.r_cap == 0 {
                    return Err(Error::InvalidConfig("reservoir size must be positive".into()));
                }
                let mut rng = SplitMix64::seed_from_u64(cfg.seed);
                let mut rows = index::sample(&mut rng, n, cfg.r_cap.min(n)).into_vec();
                // Ascending order keeps r_cap = n bit-identical to the exact sum.
                rows.sort_unstable();
                rows
            }
        };
        Ok(Self { matrix, rows })
    }

    pub fn sampled_rows(&self) -> &[usize] {
        &self.rows
    }
}

impl Objective for FacilityLocation {
    fn ground_size(&self) -> usize {
        self.matrix.len()
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn value(&self, set: &ElementSet) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        let total: f64 = self
            .rows
            .iter()
            .map(|&i| set.iter().map(|j| self.matrix.get(i, j)).fold(0.0, f64::max))
            .sum();
        Ok(total / self.rows.len() as f64)
    }

    fn name(&self) -> &str {
        "facility-location"
    }
}

pub fn make_facility_location(
    matrix: SimilarityMatrix,
    estimator: Option<ReservoirConfig>,
) -> Result<ObjectiveOracle> {
    Ok(ObjectiveOracle::new(FacilityLocation::new(matrix, estimator)?))
}

/// `f(S) = log det(I + alpha * M_S)`.
#[derive(Clone, Debug)]
pub struct LogDet {
    matrix: SimilarityMatrix,
    alpha: f64,
}

impl LogDet {
    pub fn new(matrix: SimilarityMatrix, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidConfig(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self { matrix, alpha })
    }
}

impl Objective for LogDet {
    fn ground_size(&self) -> usize {
        self.matrix.len()
    }

    fn is_monotone(&self) -> bool {
        true
    }

    fn value(&self, set: &ElementSet) -> Result<f64> {
        let k = set.len();
        if k == 0 {
            return Ok(0.0);
        }
        if k > LOGDET_MAX_SET {
            return Err(Error::SizeLimit {
                size: k,
                max: LOGDET_MAX_SET,
            });
        }
        let ids = set.to_vec();
        let sub = DMatrix::from_fn(k, k, |a, b| {
            let base = self.alpha * self.matrix.get(ids[a], ids[b]);
            if a == b {
                1.0 + base
            } else {
                base
            }
        });
        let chol = sub
            .cholesky()
            .ok_or_else(|| Error::Numeric("log-det submatrix is not positive definite".into()))?;
        let logdet: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        if !logdet.is_finite() {
            return Err(Error::Numeric(format!("log-det evaluated to {logdet}")));
        }
        Ok(logdet.max(0.0))
    }

    fn name(&self) -> &str {
        "logdet"
    }
}

pub fn make_logdet(matrix: SimilarityMatrix, alpha: f64) -> Result<ObjectiveOracle> {
    Ok(ObjectiveOracle::new(LogDet::new(matrix, alpha)?))
}
