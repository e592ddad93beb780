//! Numeric trait shared by the exact and floating-point LP solvers.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Q};

/// Absolute tolerance under which a float flow or slack counts as zero.
pub const FEASIBILITY_TOL: f64 = 1e-12;
/// A float reduced cost must be below `-OPTIMALITY_TOL` to enter the basis.
pub const OPTIMALITY_TOL: f64 = 1e-9;

/// Field operations plus the sign tests the simplex variants need. The exact
/// implementation for [`Q`] compares against zero; the `f64` one uses
/// [`FEASIBILITY_TOL`] and [`OPTIMALITY_TOL`].
pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// Reduced cost that strictly improves the objective.
    fn is_improving(&self) -> bool;
    /// Zero up to feasibility tolerance.
    fn is_negligible(&self) -> bool;
    /// Strictly positive beyond feasibility tolerance.
    fn is_positive_tol(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }
    fn from_q(value: &Q) -> Self;
    fn to_f64(&self) -> f64;
}

impl LpScalar for Q {
    fn is_improving(&self) -> bool {
        self.is_negative()
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn from_q(value: &Q) -> Self {
        value.clone()
    }
    fn to_f64(&self) -> f64 {
        rational::to_f64(self)
    }
}

impl LpScalar for f64 {
    fn is_improving(&self) -> bool {
        *self < -OPTIMALITY_TOL
    }
    fn is_negligible(&self) -> bool {
        self.abs() <= FEASIBILITY_TOL
    }
    fn from_q(value: &Q) -> Self {
        rational::to_f64(value)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
