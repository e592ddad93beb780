//! Points of the affine hyperplane `t_1 + ... + t_{n+1} = 1` and directions
//! of its underlying linear space, plus the planar charts used for `n = 2`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// Nonnegative coordinates; the probability simplex.
    Simplex,
    /// Any point of the affine hyperplane.
    Hyperplane,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("coordinates sum to {0}, expected 1")]
    NotAffine(String),
    #[error("coordinates sum to {0}, expected 0")]
    NotDirection(String),
    #[error("coordinate {index} is negative ({value}) in the simplex chart")]
    NegativeCoordinate { index: usize, value: String },
    #[error("need at least two coordinates, got {0}")]
    TooFewCoordinates(usize),
}

impl PointError {
    pub fn kind(&self) -> &'static str {
        match self {
            PointError::NotAffine(_) => "NotAffine",
            PointError::NotDirection(_) => "NotDirection",
            PointError::NegativeCoordinate { .. } => "NegativeCoordinate",
            PointError::TooFewCoordinates(_) => "TooFewCoordinates",
        }
    }
}

/// Exact point with coordinates summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePoint {
    coords: Vec<Q>,
    chart: Chart,
}

impl AffinePoint {
    /// A point of the probability simplex.
    pub fn simplex(coords: Vec<Q>) -> Result<Self, PointError> {
        let p = Self::hyperplane(coords)?;
        if let Some((index, value)) = p.coords.iter().enumerate().find(|(_, c)| c.is_negative()) {
            return Err(PointError::NegativeCoordinate {
                index,
                value: value.to_string(),
            });
        }
        Ok(Self {
            chart: Chart::Simplex,
            ..p
        })
    }

    /// A point of the affine hyperplane; coordinates may be negative.
    pub fn hyperplane(coords: Vec<Q>) -> Result<Self, PointError> {
        if coords.len() < 2 {
            return Err(PointError::TooFewCoordinates(coords.len()));
        }
        let sum: Q = coords.iter().sum();
        if sum != rational::int(1) {
            return Err(PointError::NotAffine(sum.to_string()));
        }
        Ok(Self {
            coords,
            chart: Chart::Hyperplane,
        })
    }

    /// Simplex chart when every coordinate is nonnegative, hyperplane otherwise.
    pub fn new(coords: Vec<Q>) -> Result<Self, PointError> {
        let p = Self::hyperplane(coords)?;
        if p.coords.iter().all(|c| !c.is_negative()) {
            Ok(Self {
                chart: Chart::Simplex,
                ..p
            })
        } else {
            Ok(p)
        }
    }

    /// Standard basis vector `e_i` (0-based).
    pub fn vertex(n_states: usize, i: usize) -> Self {
        let coords = (0..n_states)
            .map(|k| if k == i { rational::int(1) } else { Q::zero() })
            .collect();
        Self {
            coords,
            chart: Chart::Simplex,
        }
    }

    /// Uniform distribution on `n_states` states.
    pub fn barycenter(n_states: usize) -> Self {
        Self {
            coords: vec![rational::q(1, n_states as i64); n_states],
            chart: Chart::Simplex,
        }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn in_simplex(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// `self + v`.
    pub fn translate(&self, v: &DirectionVector) -> Self {
        assert_eq!(self.coords.len(), v.coords.len(), "dimension mismatch");
        let coords = self.coords.iter().zip(&v.coords).map(|(a, b)| a + b).collect();
        Self::new(coords).expect("translation preserves the coordinate sum")
    }

    /// `self - other` as a direction.
    pub fn sub(&self, other: &AffinePoint) -> DirectionVector {
        assert_eq!(self.coords.len(), other.coords.len(), "dimension mismatch");
        DirectionVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational::to_f64).collect()
    }

    /// Exact planar chart `(t_1, t_2)`; requires `n = 2`.
    pub fn exact_chart(&self) -> (Q, Q) {
        assert_eq!(self.coords.len(), 3, "planar chart needs three coordinates");
        (self.coords[0].clone(), self.coords[1].clone())
    }

    /// Exact point from a float barycentric triple, with the third coordinate
    /// fixed by the affine constraint.
    pub fn from_f64_planar(t: &[f64; 3]) -> Option<Self> {
        let t1 = rational::from_f64(t[0])?;
        let t2 = rational::from_f64(t[1])?;
        let t3 = rational::int(1) - &t1 - &t2;
        Self::new(vec![t1, t2, t3]).ok()
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for AffinePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(rational::format_rational).collect();
        parts.serialize(s)
    }
}

/// Exact vector with coordinates summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectionVector {
    coords: Vec<Q>,
}

impl DirectionVector {
    pub fn new(coords: Vec<Q>) -> Result<Self, PointError> {
        if coords.len() < 2 {
            return Err(PointError::TooFewCoordinates(coords.len()));
        }
        let sum: Q = coords.iter().sum();
        if !sum.is_zero() {
            return Err(PointError::NotDirection(sum.to_string()));
        }
        Ok(Self { coords })
    }

    /// `(e_i - e_j) * scale` (0-based indices).
    pub fn edge(n_states: usize, i: usize, j: usize, scale: &Q) -> Self {
        let mut coords = vec![Q::zero(); n_states];
        coords[i] += scale;
        coords[j] -= scale;
        Self { coords }
    }

    pub fn zero(n_states: usize) -> Self {
        Self {
            coords: vec![Q::zero(); n_states],
        }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Q) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> Q {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational::to_f64).collect()
    }

    /// Exact planar chart `(t_1, t_2)` of a direction; requires `n = 2`.
    pub fn exact_chart(&self) -> (Q, Q) {
        assert_eq!(self.coords.len(), 3, "planar chart needs three coordinates");
        (self.coords[0].clone(), self.coords[1].clone())
    }

    /// True when `self = lambda * other` for some nonzero rational `lambda`.
    pub fn is_parallel(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() || self.len() != other.len() {
            return false;
        }
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| &self.coords[i] * &other.coords[j] == &self.coords[j] * &other.coords[i]))
    }
}

impl fmt::Display for DirectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for DirectionVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(rational::format_rational).collect();
        parts.serialize(s)
    }
}

/// Exact 2D cross product `a.x * b.y - a.y * b.x`.
pub fn cross2(a: &(Q, Q), b: &(Q, Q)) -> Q {
    &a.0 * &b.1 - &a.1 * &b.0
}

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Equilateral drawing of the simplex: `e_1 -> (1, 0)`, `e_2 -> (1/2, sqrt(3)/2)`,
/// `e_3 -> (0, 0)`. A similarity of the plane `sum t = 1`, so angles and
/// Euclidean ratios are preserved.
pub fn to_plot(t: &[f64; 3]) -> (f64, f64) {
    (t[0] + 0.5 * t[1], SQRT3_2 * t[1])
}

/// Inverse of [`to_plot`].
pub fn from_plot(x: f64, y: f64) -> [f64; 3] {
    let t2 = y / SQRT3_2;
    let t1 = x - 0.5 * t2;
    [t1, t2, 1.0 - t1 - t2]
}

/// Linear part of [`to_plot`], for directions.
pub fn direction_to_plot(v: &[f64; 3]) -> (f64, f64) {
    (v[0] + 0.5 * v[1], SQRT3_2 * v[1])
}

/// Linear part of [`from_plot`], for directions.
pub fn direction_from_plot(x: f64, y: f64) -> [f64; 3] {
    let t2 = y / SQRT3_2;
    let t1 = x - 0.5 * t2;
    [t1, t2, -t1 - t2]
}

pub fn to_array3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn simplex_chart_rejects_negative_and_unnormalized() {
        assert!(AffinePoint::simplex(vec![q(1, 2), q(1, 2), q(0, 1)]).is_ok());
        assert!(matches!(
            AffinePoint::simplex(vec![q(3, 2), q(-1, 2), q(0, 1)]),
            Err(PointError::NegativeCoordinate { index: 1, .. })
        ));
        assert!(matches!(
            AffinePoint::simplex(vec![q(1, 2), q(1, 3), q(0, 1)]),
            Err(PointError::NotAffine(_))
        ));
        let p = AffinePoint::new(vec![q(3, 2), q(-1, 2), q(0, 1)]).unwrap();
        assert_eq!(p.chart(), Chart::Hyperplane);
    }

    #[test]
    fn directions_sum_to_zero() {
        assert!(DirectionVector::new(vec![q(1, 1), q(-1, 1), q(0, 1)]).is_ok());
        assert!(DirectionVector::new(vec![q(1, 1), q(0, 1)]).is_err());
        let e = DirectionVector::edge(3, 0, 2, &q(1, 2));
        assert_eq!(e.coords(), &[q(1, 2), q(0, 1), q(-1, 2)]);
        assert!(e.is_parallel(&DirectionVector::edge(3, 2, 0, &q(7, 1))));
        assert!(!e.is_parallel(&DirectionVector::edge(3, 0, 1, &q(1, 1))));
    }

    #[test]
    fn plot_chart_round_trip_and_similarity() {
        let t = [0.2, 0.5, 0.3];
        let (x, y) = to_plot(&t);
        let back = from_plot(x, y);
        for k in 0..3 {
            assert!((back[k] - t[k]).abs() < 1e-15);
        }
        // |e_i - e_j| = sqrt(2) in R^3 maps to 1 in the chart for every pair.
        let e = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let a = to_plot(&e[i]);
                    let b = to_plot(&e[j]);
                    let len = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
                    assert!((len - 1.0).abs() < 1e-15);
                }
            }
        }
    }
}
