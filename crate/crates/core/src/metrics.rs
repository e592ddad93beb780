//! Finite metric spaces on the states `{1, ..., n+1}`.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use thiserror::Error;

use crate::rational::{self, ParseRationalError, Q};

/// Validation failures. State indices are 1-based, matching `d_ij` notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("matrix is not square (row {row} has {len} entries, expected {expected})")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("metric needs at least two states, got {0}")]
    TooFewStates(usize),
    #[error("d[{i}][{j}] != d[{j}][{i}]")]
    NotSymmetric { i: usize, j: usize },
    #[error("d[{i}][{i}] is not zero")]
    NonzeroDiagonal { i: usize },
    #[error("d[{i}][{j}] is not positive")]
    NonpositiveOffDiagonal { i: usize, j: usize },
    #[error("triangle inequality fails: d[{i}][{j}] > d[{i}][{k}] + d[{k}][{j}]")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("malformed metric JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
}

impl MetricError {
    pub fn kind(&self) -> &'static str {
        match self {
            MetricError::NotSquare { .. } => "NotSquare",
            MetricError::TooFewStates(_) => "TooFewStates",
            MetricError::NotSymmetric { .. } => "NotSymmetric",
            MetricError::NonzeroDiagonal { .. } => "NonzeroDiagonal",
            MetricError::NonpositiveOffDiagonal { .. } => "NonpositiveOffDiagonal",
            MetricError::TriangleViolation { .. } => "TriangleViolation",
            MetricError::Json(_) => "MalformedJson",
            MetricError::Rational(_) => "InvalidRational",
        }
    }
}

/// A validated metric `d` on `n_states` points, stored as an exact symmetric
/// matrix with zero diagonal, positive off-diagonal entries and the triangle
/// inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    entries: Vec<Vec<Q>>,
}

impl FiniteMetric {
    pub fn n_states(&self) -> usize {
        self.entries.len()
    }

    /// Dimension `n` of the simplex the metric lives over.
    pub fn dim(&self) -> usize {
        self.entries.len() - 1
    }

    /// `d_ij` with 0-based indices.
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Q>] {
        &self.entries
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(rational::to_f64).collect())
            .collect()
    }

    /// Reorders the states: the new state `k` is old state `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> FiniteMetric {
        let n = self.n_states();
        assert_eq!(perm.len(), n);
        let entries = (0..n)
            .map(|i| (0..n).map(|j| self.entries[perm[i]][perm[j]].clone()).collect())
            .collect();
        FiniteMetric { entries }
    }

    /// Parses the `{"d": [[...], ...]}` document; entries are integers or
    /// rational strings.
    pub fn from_json_str(text: &str) -> Result<FiniteMetric, MetricError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| MetricError::Json(e.to_string()))?;
        Self::from_json(&doc)
    }

    pub fn from_json(doc: &Value) -> Result<FiniteMetric, MetricError> {
        let rows = doc
            .get("d")
            .and_then(Value::as_array)
            .ok_or_else(|| MetricError::Json("expected an object with array field \"d\"".into()))?;
        let mut raw = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| MetricError::Json("every row of \"d\" must be an array".into()))?;
            raw.push(row.iter().map(rational::from_json_value).collect::<Result<Vec<_>, _>>()?);
        }
        validate_metric(&raw)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|row| Value::Array(row.iter().map(rational::to_json_value).collect()))
            .collect();
        serde_json::json!({ "d": rows })
    }
}

/// Checks every metric axiom and returns the validated metric.
pub fn validate_metric(raw: &[Vec<Q>]) -> Result<FiniteMetric, MetricError> {
    let n = raw.len();
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(MetricError::NotSquare {
                row: row + 1,
                len: r.len(),
                expected: n,
            });
        }
    }
    if n < 2 {
        return Err(MetricError::TooFewStates(n));
    }
    for i in 0..n {
        if !raw[i][i].is_zero() {
            return Err(MetricError::NonzeroDiagonal { i: i + 1 });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if raw[i][j] != raw[j][i] {
                return Err(MetricError::NotSymmetric { i: i + 1, j: j + 1 });
            }
            if !raw[i][j].is_positive() {
                return Err(MetricError::NonpositiveOffDiagonal { i: i + 1, j: j + 1 });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if raw[i][j] > &raw[i][k] + &raw[k][j] {
                    return Err(MetricError::TriangleViolation {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                    });
                }
            }
        }
    }
    Ok(FiniteMetric { entries: raw.to_vec() })
}

/// Deterministic pseudo-random metric.
///
/// Off-diagonal entries are drawn as `scale * u / 1000` with `u` uniform in
/// `1..=1000`, then replaced by all-pairs shortest-path distances so the
/// triangle inequality holds.
pub fn random_metric(n_states: usize, seed: u64, scale: &Q) -> FiniteMetric {
    assert!(n_states >= 2, "random_metric needs at least two states");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![Q::zero(); n_states]; n_states];
    for i in 0..n_states {
        for j in (i + 1)..n_states {
            let u: i64 = rng.gen_range(1..=1000);
            let v = scale * rational::q(u, 1000);
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    // Floyd-Warshall closure.
    for k in 0..n_states {
        for i in 0..n_states {
            for j in 0..n_states {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    validate_metric(&d).expect("shortest-path closure yields a metric")
}
