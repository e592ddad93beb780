//! Curves in the plane `t_1 + t_2 + t_3 = 1` and their tangencies with the
//! edge directions of planar Wasserstein balls.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ball;
use crate::metrics::FiniteMetric;
use crate::point::{self, AffinePoint, DirectionVector};
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("parameter {0} is outside [0, 1]")]
    ParameterOutOfRange(String),
    #[error("Veronese degree must be at least 1")]
    ZeroDegree,
    #[error("expected a metric on 3 states, got {0}")]
    DimensionMismatch(usize),
}

impl CurveError {
    pub fn kind(&self) -> &'static str {
        match self {
            CurveError::ParameterOutOfRange(_) => "ParameterOutOfRange",
            CurveError::ZeroDegree => "ZeroDegree",
            CurveError::DimensionMismatch(_) => "DimensionMismatch",
        }
    }
}

/// A smooth curve `[0, 1] -> plane`, evaluated in floating point.
pub trait ParametricCurve: Sync {
    fn name(&self) -> &str;
    /// Barycentric coordinates, summing to one.
    fn eval(&self, p: f64) -> [f64; 3];
    /// Derivative of [`ParametricCurve::eval`]; sums to zero.
    fn tangent(&self, p: f64) -> [f64; 3];
    /// Degree of the dual of the projective closure, when known.
    fn dual_degree(&self) -> Option<u32>;
    /// `eval(0) == eval(1)`.
    fn is_closed(&self) -> bool {
        false
    }
}

/// `p -> (p^2, 2p(1-p), (1-p)^2)`, the Veronese conic in the triangle.
#[derive(Debug, Clone, Copy, Default)]
pub struct HardyWeinberg;

impl ParametricCurve for HardyWeinberg {
    fn name(&self) -> &str {
        "hw"
    }
    fn eval(&self, p: f64) -> [f64; 3] {
        let q = 1.0 - p;
        [p * p, 2.0 * p * q, q * q]
    }
    fn tangent(&self, p: f64) -> [f64; 3] {
        [2.0 * p, 2.0 - 4.0 * p, 2.0 * p - 2.0]
    }
    fn dual_degree(&self) -> Option<u32> {
        Some(2)
    }
}

/// Circle `p -> center + radius (cos 2 pi p, sin 2 pi p)` drawn in the
/// equilateral chart of [`point::to_plot`].
#[derive(Debug, Clone, Copy)]
pub struct Circle {
    pub center: (f64, f64),
    pub radius: f64,
}

impl Circle {
    /// Circle around the barycenter, inside the triangle for
    /// `radius < sqrt(3)/6`.
    pub fn centered(radius: f64) -> Self {
        let c = point::to_plot(&[1.0 / 3.0; 3]);
        Circle { center: c, radius }
    }
}

impl ParametricCurve for Circle {
    fn name(&self) -> &str {
        "circle"
    }
    fn eval(&self, p: f64) -> [f64; 3] {
        let a = std::f64::consts::TAU * p;
        point::from_plot(self.center.0 + self.radius * a.cos(), self.center.1 + self.radius * a.sin())
    }
    fn tangent(&self, p: f64) -> [f64; 3] {
        let a = std::f64::consts::TAU * p;
        let s = std::f64::consts::TAU * self.radius;
        point::direction_from_plot(-s * a.sin(), s * a.cos())
    }
    fn dual_degree(&self) -> Option<u32> {
        Some(2)
    }
    fn is_closed(&self) -> bool {
        true
    }
}

/// Point of the degree-`n` Veronese curve:
/// `(p^n, n p^(n-1) (1-p), ..., C(n,k) p^(n-k) (1-p)^k, ..., (1-p)^n)`.
pub fn veronese_point(n: usize, p: &Q) -> Result<AffinePoint, CurveError> {
    if n == 0 {
        return Err(CurveError::ZeroDegree);
    }
    if p.is_negative() || p > &Q::one() {
        return Err(CurveError::ParameterOutOfRange(p.to_string()));
    }
    let q = Q::one() - p;
    let coords = (0..=n)
        .map(|k| {
            let binom = Q::from_integer(num_integer::binomial(n as u64, k as u64).into());
            binom * num_traits::pow(p.clone(), n - k) * num_traits::pow(q.clone(), k)
        })
        .collect();
    Ok(AffinePoint::simplex(coords).expect("binomial expansion sums to one"))
}

/// Exact tangent `(2p, 2 - 4p, 2p - 2)` of the Hardy-Weinberg curve.
pub fn hw_tangent(p: &Q) -> DirectionVector {
    let two = rational::int(2);
    DirectionVector::new(vec![&two * p, &two - rational::int(4) * p, &two * p - &two])
        .expect("tangent coordinates sum to zero")
}

/// Which of the three edge directions of the planar ball, in the order of
/// [`ball::edge_directions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCase {
    A,
    B,
    C,
}

impl EdgeCase {
    pub fn index(self) -> usize {
        match self {
            EdgeCase::A => 0,
            EdgeCase::B => 1,
            EdgeCase::C => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EdgeCase::A => "a",
            EdgeCase::B => "b",
            EdgeCase::C => "c",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangencyEntry {
    #[serde(with = "rational::serde_text")]
    pub p_star: Q,
    pub edge_case: EdgeCase,
    pub direction: DirectionVector,
}

/// Conditions that held with equality and produced no interior entry, or
/// entries that share a parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degeneracy {
    /// `d_12 = d_13` (case a, at `p = 0`) or `d_23 = d_13` (case b, at `p = 1`).
    BoundaryTangency {
        edge_case: EdgeCase,
        #[serde(with = "rational::serde_text")]
        p_star: Q,
    },
    /// Two edge directions are parallel (a side of the hexagon collapsed
    /// because one generator is not extreme) and touch at the same point.
    CoincidentTangency {
        cases: (EdgeCase, EdgeCase),
        #[serde(with = "rational::serde_text")]
        p_star: Q,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TangencyReport {
    /// Sorted by `p_star`, each in `(0, 1)`, at most one per edge case.
    pub entries: Vec<TangencyEntry>,
    pub degenerate: Vec<Degeneracy>,
}

impl TangencyReport {
    pub fn parameters(&self) -> Vec<Q> {
        self.entries.iter().map(|e| e.p_star.clone()).collect()
    }
}

/// Interior parameters where the Hardy-Weinberg tangent is parallel to one of
/// the edge directions of the `W_d` ball:
///
/// * (a) `p* = (d12 - d13) / (2 d12 - d13)` iff `d12 > d13`;
/// * (b) `1 - p* = (d23 - d13) / (2 d23 - d13)` iff `d23 > d13`;
/// * (c) `p* = d23 / (d12 + d23)` always.
pub fn hw_tangency_points(d: &FiniteMetric) -> Result<TangencyReport, CurveError> {
    if d.n_states() != 3 {
        return Err(CurveError::DimensionMismatch(d.n_states()));
    }
    let dirs = ball::edge_directions(d).expect("three states");
    let (d12, d13, d23) = (d.get(0, 1), d.get(0, 2), d.get(1, 2));
    let two = rational::int(2);
    let mut report = TangencyReport::default();

    if d12 > d13 {
        report.entries.push(TangencyEntry {
            p_star: (d12 - d13) / (&two * d12 - d13),
            edge_case: EdgeCase::A,
            direction: dirs[0].clone(),
        });
    } else if d12 == d13 {
        report.degenerate.push(Degeneracy::BoundaryTangency {
            edge_case: EdgeCase::A,
            p_star: Q::zero(),
        });
    }
    if d23 > d13 {
        let one_minus = (d23 - d13) / (&two * d23 - d13);
        report.entries.push(TangencyEntry {
            p_star: Q::one() - one_minus,
            edge_case: EdgeCase::B,
            direction: dirs[1].clone(),
        });
    } else if d23 == d13 {
        report.degenerate.push(Degeneracy::BoundaryTangency {
            edge_case: EdgeCase::B,
            p_star: Q::one(),
        });
    }
    report.entries.push(TangencyEntry {
        p_star: d23 / (d12 + d23),
        edge_case: EdgeCase::C,
        direction: dirs[2].clone(),
    });

    report
        .entries
        .sort_by(|a, b| a.p_star.cmp(&b.p_star).then(a.edge_case.cmp(&b.edge_case)));
    for w in report.entries.windows(2) {
        if w[0].p_star == w[1].p_star {
            report.degenerate.push(Degeneracy::CoincidentTangency {
                cases: (w[0].edge_case, w[1].edge_case),
                p_star: w[0].p_star.clone(),
            });
        }
    }
    Ok(report)
}

/// Planar cross product of two directions, in the equilateral chart.
pub fn chart_cross(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let a = point::direction_to_plot(u);
    let b = point::direction_to_plot(v);
    a.0 * b.1 - a.1 * b.0
}

/// Roots of `cross(tangent(p), direction)`: sign changes over
/// `bracket_count` equal subintervals, refined by bisection to an absolute
/// parameter width of `1e-12`. Open curves report roots in `(0, 1)`; closed
/// curves report roots in `[0, 1)`, scanning across the seam at `p = 0`.
pub fn planar_tangency_points(curve: &dyn ParametricCurve, direction: &[f64; 3], bracket_count: usize) -> Vec<f64> {
    const WIDTH: f64 = 1e-12;
    let brackets = bracket_count.max(1);
    let closed = curve.is_closed();
    let f = |p: f64| chart_cross(&curve.tangent(if closed { p.rem_euclid(1.0) } else { p }), direction);
    // Half a bracket of offset keeps a root at the seam inside a bracket.
    let offset = if closed { -0.5 / brackets as f64 } else { 0.0 };
    let at = |k: usize| offset + k as f64 / brackets as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut a = at(0);
    let mut fa = f(a);
    for k in 1..=brackets {
        let b = at(k);
        let fb = f(b);
        let root = if fa == 0.0 {
            Some(a)
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > WIDTH {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        } else {
            None
        };
        if let Some(r) = root {
            if closed {
                let r = r.rem_euclid(1.0);
                roots.push(if r > 1.0 - WIDTH { 0.0 } else { r });
            } else if r > 0.0 && r < 1.0 {
                roots.push(r);
            }
        }
        a = b;
        fa = fb;
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-9);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, q};

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese_point(2, &q(1, 2)).unwrap().coords(), &[q(1, 4), q(1, 2), q(1, 4)]);
        assert_eq!(veronese_point(2, &int(0)).unwrap().coords(), &[int(0), int(0), int(1)]);
        assert_eq!(
            veronese_point(3, &q(1, 3)).unwrap().coords(),
            &[q(1, 27), q(2, 9), q(4, 9), q(8, 27)]
        );
        assert!(matches!(veronese_point(2, &q(3, 2)), Err(CurveError::ParameterOutOfRange(_))));
        assert_eq!(veronese_point(0, &q(1, 2)), Err(CurveError::ZeroDegree));
    }

    #[test]
    fn hw_tangent_examples() {
        assert_eq!(hw_tangent(&q(1, 2)).coords(), &[int(1), int(0), int(-1)]);
        assert_eq!(hw_tangent(&int(0)).coords(), &[int(0), int(2), int(-2)]);
        assert_eq!(hw_tangent(&q(1, 3)).coords(), &[q(2, 3), q(2, 3), q(-4, 3)]);
    }

    fn cases(r: &TangencyReport) -> Vec<(Q, EdgeCase)> {
        r.entries.iter().map(|e| (e.p_star.clone(), e.edge_case)).collect()
    }

    #[test]
    fn census_metrics() {
        let r1 = hw_tangency_points(&fixtures::census_d1()).unwrap();
        assert_eq!(cases(&r1), vec![(q(1, 2), EdgeCase::C)]);
        assert_eq!(r1.degenerate.len(), 2);
        let r2 = hw_tangency_points(&fixtures::census_d2()).unwrap();
        assert_eq!(cases(&r2), vec![(q(2, 3), EdgeCase::C), (q(4, 5), EdgeCase::B)]);
        let r3 = hw_tangency_points(&fixtures::census_d3()).unwrap();
        assert_eq!(
            cases(&r3),
            vec![(q(1, 3), EdgeCase::A), (q(1, 2), EdgeCase::C), (q(2, 3), EdgeCase::B)]
        );
        assert!(r3.degenerate.is_empty());
    }

    #[test]
    fn each_entry_solves_the_parallel_system() {
        for d in [fixtures::census_d1(), fixtures::census_d2(), fixtures::census_d3()] {
            for e in hw_tangency_points(&d).unwrap().entries {
                assert!(hw_tangent(&e.p_star).is_parallel(&e.direction));
            }
        }
    }

    #[test]
    fn collapsed_side_is_flagged() {
        // d12 = d13 + d23: (e1 - e2)/d12 is not extreme, (a) and (c) coincide.
        let d = fixtures::planar_metric(int(3), int(1), int(2)).unwrap();
        let r = hw_tangency_points(&d).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert!(r.degenerate.contains(&Degeneracy::CoincidentTangency {
            cases: (EdgeCase::A, EdgeCase::C),
            p_star: q(2, 5),
        }));
    }

    #[test]
    fn rejects_non_planar() {
        let d = crate::metrics::random_metric(4, 3, &int(1));
        assert_eq!(hw_tangency_points(&d), Err(CurveError::DimensionMismatch(4)));
    }

    #[test]
    fn numeric_root_finder() {
        let dirs = ball::edge_directions(&fixtures::census_d1()).unwrap();
        let c = point::to_array3(&dirs[2].to_f64());
        let roots = planar_tangency_points(&HardyWeinberg, &c, 64);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 0.5).abs() < 1e-10);

        let circle = Circle::centered(0.2);
        let horizontal = point::direction_from_plot(1.0, 0.0);
        let roots = planar_tangency_points(&circle, &horizontal, 100);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.25).abs() < 1e-10);
        assert!((roots[1] - 0.75).abs() < 1e-10);
        // Vertical tangents sit at p = 0 (the seam) and p = 1/2.
        let vertical = point::direction_from_plot(0.0, 1.0);
        let roots = planar_tangency_points(&circle, &vertical, 100);
        assert_eq!(roots.len(), 2);
        assert!(roots[0].abs() < 1e-10);
        assert!((roots[1] - 0.5).abs() < 1e-10);

        // (0, 2, -2) is the tangent at p = 0 only: no interior root.
        assert!(planar_tangency_points(&HardyWeinberg, &[0.0, 1.0, -1.0], 50).is_empty());
    }

    #[test]
    fn tangents_match_finite_differences() {
        let curves: [&dyn ParametricCurve; 2] = [&HardyWeinberg, &Circle::centered(0.15)];
        for c in curves {
            for k in 1..100 {
                let p = k as f64 / 100.0;
                let h = 1e-6;
                let (a, b) = (c.eval(p + h), c.eval(p - h));
                let t = c.tangent(p);
                let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
                let err: f64 = (0..3).map(|i| ((a[i] - b[i]) / (2.0 * h) - t[i]).powi(2)).sum::<f64>().sqrt();
                assert!(err / norm <= 1e-6, "{} at {p}: {}", c.name(), err / norm);
                assert!((c.eval(p).iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(t.iter().sum::<f64>().abs() < 1e-12);
            }
        }
    }
}
