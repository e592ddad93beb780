//! Named metrics on three states used by the worked examples, tests and
//! the `check` subcommand.

use crate::metrics::{validate_metric, FiniteMetric};
use crate::rational::int;

fn from_upper(d12: i64, d13: i64, d23: i64) -> FiniteMetric {
    let raw = vec![
        vec![int(0), int(d12), int(d13)],
        vec![int(d12), int(0), int(d23)],
        vec![int(d13), int(d23), int(0)],
    ];
    validate_metric(&raw).expect("fixture metrics are valid")
}

/// All distances one; hexagonal ball.
pub fn ball_d1() -> FiniteMetric {
    from_upper(1, 1, 1)
}

/// `d_13 = d_12 + d_23`; the generator `(e_1 - e_3)/2` is not extreme and
/// the ball is a quadrilateral.
pub fn ball_d2() -> FiniteMetric {
    from_upper(1, 2, 1)
}

/// One full-dimensional cell on the Hardy-Weinberg curve (same as [`ball_d1`]).
pub fn census_d1() -> FiniteMetric {
    ball_d1()
}

/// Two full-dimensional cells: `d_12 < d_13 < d_23`.
pub fn census_d2() -> FiniteMetric {
    from_upper(2, 3, 4)
}

/// Three full-dimensional cells: `d_13 < min(d_12, d_23)`.
pub fn census_d3() -> FiniteMetric {
    from_upper(2, 1, 2)
}

/// Metric on three states from `(d_12, d_13, d_23)`, if valid.
pub fn planar_metric(d12: crate::rational::Q, d13: crate::rational::Q, d23: crate::rational::Q) -> Option<FiniteMetric> {
    use num_traits::Zero;
    let z = crate::rational::Q::zero();
    let raw = vec![
        vec![z.clone(), d12.clone(), d13.clone()],
        vec![d12, z.clone(), d23.clone()],
        vec![d13, d23, z],
    ];
    validate_metric(&raw).ok()
}
