//! Wasserstein and polyhedral-norm distances on the probability simplex,
//! Wasserstein balls, and Voronoi cells of curves under those distances.
//!
//! * [`metrics`]: finite metrics `d` on `n + 1` states.
//! * [`transport`]: `W_d` by network simplex, by gauge LP and by enumeration.
//! * [`ball`]: Wasserstein balls, exact planar hulls, faces and face cones.
//! * [`curve`]: the Hardy-Weinberg curve and its edge tangencies.
//! * [`counting`]: the full-dimensional cell census and the facet bound.
//! * [`voronoi`]: raster diagrams and dimension certificates.

pub mod ball;
pub mod cli;
pub mod counting;
pub mod curve;
pub mod fixtures;
pub mod metrics;
pub mod point;
pub mod rational;
pub mod render;
pub mod scalar;
pub mod transport;
pub mod voronoi;

pub use ball::{build_ball, FacetNorm, Face, PolyBall};
pub use counting::{count_full_dim_cells_hw, full_dim_upper_bound, CellCensus, Regime};
pub use curve::{hw_tangency_points, Circle, HardyWeinberg, ParametricCurve, TangencyReport};
pub use metrics::{random_metric, validate_metric, FiniteMetric};
pub use point::{AffinePoint, DirectionVector};
pub use rational::Q;
pub use transport::{brute_force_distance, gauge_distance, wasserstein_distance};
pub use voronoi::{raster_voronoi, sample_curve, CurveSample, VoronoiRaster};
