//! Wasserstein distance `W_d` between distributions on `n + 1` states.
//!
//! Three independent routes compute the same number:
//!
//! * [`wasserstein_distance`] solves the transportation LP with the network
//!   simplex in [`network_simplex`] (exact or `f64`).
//! * [`gauge_distance`] evaluates the gauge of the ball
//!   `conv{(e_i - e_j) / d_ij}` with a dense simplex; it is defined on the
//!   whole hyperplane, negative coordinates included.
//! * [`brute_force_distance`] enumerates every basic feasible solution.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::metrics::FiniteMetric;
use crate::point::{AffinePoint, Chart, DirectionVector};
use crate::rational::{self, Q};

mod brute;
pub mod gauge;
pub mod network_simplex;

pub use network_simplex::{solve_transportation, TransportSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransportError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the probability simplex")]
    NotInSimplex,
    #[error("marginals do not balance (supply {supply}, demand {demand})")]
    Unbalanced { supply: f64, demand: f64 },
    #[error("generators do not span the direction space")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("pivot limit {0} reached")]
    PivotLimit(usize),
    #[error("brute force supports n <= 4, got n = {0}")]
    TooLarge(usize),
}

impl TransportError {
    pub fn kind(&self) -> &'static str {
        match self {
            TransportError::DimensionMismatch { .. } => "DimensionMismatch",
            TransportError::NotInSimplex => "NotInSimplex",
            TransportError::Unbalanced { .. } => "Unbalanced",
            TransportError::Infeasible => "Infeasible",
            TransportError::Unbounded => "Unbounded",
            TransportError::PivotLimit(_) => "PivotLimit",
            TransportError::TooLarge(_) => "TooLarge",
        }
    }
}

/// A coupling of `source` and `target`: nonnegative flow whose row sums are
/// the source and column sums the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportPlan {
    pub flow: Vec<Vec<Q>>,
    pub source: AffinePoint,
    pub target: AffinePoint,
}

impl TransportPlan {
    pub fn cost(&self, d: &FiniteMetric) -> Q {
        let mut total = Q::zero();
        for (i, row) in self.flow.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                total += d.get(i, j) * x;
            }
        }
        total
    }

    /// True iff every entry is nonnegative and both marginals match exactly.
    pub fn is_feasible(&self) -> bool {
        let n = self.flow.len();
        let rows_ok = (0..n).all(|i| self.flow[i].iter().sum::<Q>() == self.source.coords()[i]);
        let cols_ok = (0..n).all(|j| self.flow.iter().map(|r| &r[j]).sum::<Q>() == self.target.coords()[j]);
        let nonneg = self.flow.iter().flatten().all(|x| *x >= Q::zero());
        rows_ok && cols_ok && nonneg
    }
}

impl Serialize for TransportPlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .flow
            .iter()
            .map(|r| r.iter().map(rational::format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

fn check_inputs(mu: &AffinePoint, nu: &AffinePoint, d: &FiniteMetric) -> Result<(), TransportError> {
    for p in [mu, nu] {
        if p.coords().len() != d.n_states() {
            return Err(TransportError::DimensionMismatch {
                expected: d.n_states(),
                got: p.coords().len(),
            });
        }
        if p.chart() != Chart::Simplex {
            return Err(TransportError::NotInSimplex);
        }
    }
    Ok(())
}

/// Exact `W_d(mu, nu)` and an optimal plan, by network simplex.
pub fn wasserstein_distance(
    mu: &AffinePoint,
    nu: &AffinePoint,
    d: &FiniteMetric,
) -> Result<(Q, TransportPlan), TransportError> {
    check_inputs(mu, nu, d)?;
    let sol = solve_transportation(mu.coords(), nu.coords(), d.entries())?;
    let plan = TransportPlan {
        flow: sol.flow,
        source: mu.clone(),
        target: nu.clone(),
    };
    Ok((sol.cost, plan))
}

/// Float `W_d(mu, nu)` by network simplex; `mu` and `nu` must be
/// nonnegative and carry equal mass up to `1e-12`.
pub fn wasserstein_distance_f64(
    mu: &[f64],
    nu: &[f64],
    d: &[Vec<f64>],
) -> Result<(f64, Vec<Vec<f64>>), TransportError> {
    let n = d.len();
    for p in [mu, nu] {
        if p.len() != n {
            return Err(TransportError::DimensionMismatch { expected: n, got: p.len() });
        }
        if p.iter().any(|&x| x < -crate::scalar::FEASIBILITY_TOL) {
            return Err(TransportError::NotInSimplex);
        }
    }
    let sol = solve_transportation(mu, nu, d)?;
    Ok((sol.cost, sol.flow))
}

/// Exact gauge distance: the smallest `r` with `y - x` in
/// `r * conv(generators)`.
pub fn gauge_distance(x: &AffinePoint, y: &AffinePoint, generators: &[DirectionVector]) -> Result<Q, TransportError> {
    if x.coords().len() != y.coords().len() {
        return Err(TransportError::DimensionMismatch {
            expected: x.coords().len(),
            got: y.coords().len(),
        });
    }
    let delta = y.sub(x);
    let gens: Vec<Vec<Q>> = generators.iter().map(|g| g.coords().to_vec()).collect();
    gauge::gauge(delta.coords(), &gens)
}

/// Float gauge of the direction `delta`.
pub fn gauge_distance_f64(delta: &[f64], generators: &[Vec<f64>]) -> Result<f64, TransportError> {
    gauge::gauge(delta, generators)
}

/// Exact `W_d(mu, nu)` by enumerating every spanning-tree basic solution of
/// the transportation polytope. Exponential; limited to `n <= 4`.
pub fn brute_force_distance(mu: &AffinePoint, nu: &AffinePoint, d: &FiniteMetric) -> Result<Q, TransportError> {
    check_inputs(mu, nu, d)?;
    if d.dim() > 4 {
        return Err(TransportError::TooLarge(d.dim()));
    }
    Ok(brute::min_over_basis_trees(mu.coords(), nu.coords(), d.entries()))
}
