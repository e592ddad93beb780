//! Polyhedral balls: generators, exact planar hulls, faces and face cones.
//!
//! For a metric `d` the Wasserstein ball of radius `r` around `c` is
//! `conv{c + r (e_i - e_j) / d_ij}`. In the plane (`n = 2`) the hull is built
//! with exact orientation predicates on the chart `(t_1, t_2)`; the drawing
//! chart used for rendering is a positive-determinant linear image of it, so
//! counterclockwise order agrees in both.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::metrics::FiniteMetric;
use crate::point::{cross2, AffinePoint, DirectionVector};
use crate::rational::{self, Q};
use crate::transport::{self, TransportError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BallError {
    #[error("radius must be positive")]
    NonpositiveRadius,
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation needs a planar ball (three states), got {0} states")]
    NotPlanar(usize),
    #[error("generator set is not centrally symmetric")]
    NotCentrallySymmetric,
    #[error("generators do not span the plane")]
    Degenerate,
    #[error(transparent)]
    Transport(#[from] TransportError),
}

impl BallError {
    pub fn kind(&self) -> &'static str {
        match self {
            BallError::NonpositiveRadius => "NonpositiveRadius",
            BallError::DimensionMismatch { .. } => "DimensionMismatch",
            BallError::NotPlanar(_) => "NotPlanar",
            BallError::NotCentrallySymmetric => "NotCentrallySymmetric",
            BallError::Degenerate => "Degenerate",
            BallError::Transport(e) => e.kind(),
        }
    }
}

/// The `2 * C(n+1, 2)` directions `(e_i - e_j) / d_ij`, listed as
/// `+g, -g` pairs over `i < j`.
pub fn ball_generators(d: &FiniteMetric) -> Vec<DirectionVector> {
    let n = d.n_states();
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = Q::from_integer(1.into()) / d.get(i, j);
            let g = DirectionVector::edge(n, i, j, &scale);
            let minus = g.neg();
            out.push(g);
            out.push(minus);
        }
    }
    out
}

/// Hull edge from `hull_vertices[start]` to `hull_vertices[end]`
/// (counterclockwise), with its normal pointing into the ball.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub start: usize,
    pub end: usize,
    pub inward_normal: DirectionVector,
}

/// A face of a planar ball. `Edge(i)` runs from vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum Face {
    Empty,
    Vertex(usize),
    Edge(usize),
}

impl Face {
    /// `None` for the empty face.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Face::Empty => None,
            Face::Vertex(_) => Some(0),
            Face::Edge(_) => Some(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBall {
    pub center: AffinePoint,
    pub radius: Q,
    pub generators: Vec<DirectionVector>,
    /// Counterclockwise extreme points; empty unless `n = 2`.
    pub hull_vertices: Vec<AffinePoint>,
    pub edges: Vec<Edge>,
}

/// Ball of `W_d` with center `c` and radius `r`. The hull is computed for
/// three states; in higher dimension only the generators are stored.
pub fn build_ball(c: &AffinePoint, r: &Q, d: &FiniteMetric) -> Result<PolyBall, BallError> {
    if c.coords().len() != d.n_states() {
        return Err(BallError::DimensionMismatch {
            expected: d.n_states(),
            got: c.coords().len(),
        });
    }
    PolyBall::from_generators(c, r, ball_generators(d))
}

impl PolyBall {
    /// Ball `conv{c + r g}` of the polyhedral norm with the given centrally
    /// symmetric generators.
    pub fn from_generators(c: &AffinePoint, r: &Q, generators: Vec<DirectionVector>) -> Result<Self, BallError> {
        if !r.is_positive() {
            return Err(BallError::NonpositiveRadius);
        }
        let dim = c.coords().len();
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(BallError::DimensionMismatch {
                expected: dim,
                got: g.len(),
            });
        }
        if !generators.iter().all(|g| generators.contains(&g.neg())) {
            return Err(BallError::NotCentrallySymmetric);
        }
        let mut ball = PolyBall {
            center: c.clone(),
            radius: r.clone(),
            generators,
            hull_vertices: Vec::new(),
            edges: Vec::new(),
        };
        if dim == 3 {
            ball.build_planar_hull()?;
        }
        Ok(ball)
    }

    fn build_planar_hull(&mut self) -> Result<(), BallError> {
        let points: Vec<AffinePoint> = self
            .generators
            .iter()
            .map(|g| self.center.translate(&g.scale(&self.radius)))
            .collect();
        let hull = convex_hull(&points);
        if hull.len() < 3 {
            return Err(BallError::Degenerate);
        }
        let k = hull.len();
        if !k.is_multiple_of(2) {
            return Err(BallError::NotCentrallySymmetric);
        }
        for i in 0..k / 2 {
            let mid = hull[i].sub(&self.center).add(&hull[i + k / 2].sub(&self.center));
            if !mid.is_zero() {
                return Err(BallError::NotCentrallySymmetric);
            }
        }
        self.edges = (0..k)
            .map(|i| {
                let start = &hull[i];
                let end = &hull[(i + 1) % k];
                let e = end.sub(start);
                let c = e.coords();
                let mut normal = DirectionVector::new(vec![
                    &c[1] - &c[2],
                    &c[2] - &c[0],
                    &c[0] - &c[1],
                ])
                .expect("cross product with (1,1,1) sums to zero");
                if normal.dot(&self.center.sub(start)).is_negative() {
                    normal = normal.neg();
                }
                Edge {
                    start: i,
                    end: (i + 1) % k,
                    inward_normal: normal,
                }
            })
            .collect();
        self.hull_vertices = hull;
        Ok(())
    }

    pub fn is_planar(&self) -> bool {
        self.center.coords().len() == 3
    }

    pub fn vertex_count(&self) -> usize {
        self.hull_vertices.len()
    }

    /// Number of facets (edges) of a planar ball.
    pub fn facet_count(&self) -> usize {
        self.edges.len()
    }

    /// Empty face, then vertices, then edges.
    pub fn faces(&self) -> Vec<Face> {
        let k = self.hull_vertices.len();
        std::iter::once(Face::Empty)
            .chain((0..k).map(Face::Vertex))
            .chain((0..k).map(Face::Edge))
            .collect()
    }

    /// The face `-F`, reflected through the center.
    pub fn opposite(&self, face: Face) -> Face {
        let k = self.hull_vertices.len();
        match face {
            Face::Empty => Face::Empty,
            Face::Vertex(i) => Face::Vertex((i + k / 2) % k),
            Face::Edge(i) => Face::Edge((i + k / 2) % k),
        }
    }

    pub fn face_vertices(&self, face: Face) -> Vec<usize> {
        let k = self.hull_vertices.len();
        match face {
            Face::Empty => vec![],
            Face::Vertex(i) => vec![i],
            Face::Edge(i) => vec![i, (i + 1) % k],
        }
    }

    /// Direction `end - start` of edge `i`.
    pub fn edge_vector(&self, i: usize) -> DirectionVector {
        let e = &self.edges[i];
        self.hull_vertices[e.end].sub(&self.hull_vertices[e.start])
    }

    fn rel(&self, p: &AffinePoint) -> (Q, Q) {
        p.sub(&self.center).exact_chart()
    }

    /// Whether `y` lies in the face cone `C_F(x)` of this ball's center `x`:
    /// the open cone from `x` over the relative interior of `-F`, or `{x}`
    /// for the empty face.
    pub fn face_cone_contains(&self, face: Face, y: &AffinePoint) -> bool {
        assert!(self.is_planar(), "face cones are implemented for planar balls");
        let v = self.rel(y);
        let zero = (Q::zero(), Q::zero());
        match self.opposite(face) {
            Face::Empty => v == zero,
            Face::Vertex(i) => {
                let w = self.rel(&self.hull_vertices[i]);
                cross2(&w, &v).is_zero() && (&w.0 * &v.0 + &w.1 * &v.1).is_positive()
            }
            Face::Edge(i) => {
                let e = &self.edges[i];
                let a = self.rel(&self.hull_vertices[e.start]);
                let b = self.rel(&self.hull_vertices[e.end]);
                cross2(&a, &v).is_positive() && cross2(&v, &b).is_positive()
            }
        }
    }

    /// `C_{F,eps}(x)`: the face cone cut to gauge distance below `eps`.
    pub fn truncated_face_cone_contains(&self, face: Face, y: &AffinePoint, eps: &Q) -> Result<bool, BallError> {
        if !self.face_cone_contains(face, y) {
            return Ok(false);
        }
        let dist = transport::gauge_distance(&self.center, y, &self.generators)?;
        Ok(&dist < eps)
    }

    /// The unique face whose cone contains `y`.
    pub fn locate_face_cone(&self, y: &AffinePoint) -> Face {
        self.faces()
            .into_iter()
            .find(|&f| self.face_cone_contains(f, y))
            .expect("face cones partition the plane")
    }
}

/// `face_cone_membership(x, F, y)` for a ball centered at `x`.
pub fn face_cone_membership(x: &AffinePoint, face: Face, ball: &PolyBall, y: &AffinePoint) -> bool {
    assert_eq!(x, &ball.center, "face cones are taken at the ball's center");
    ball.face_cone_contains(face, y)
}

/// Counterclockwise extreme points of planar points, exact. Collinear points
/// on an edge are dropped; the first vertex is the lexicographically smallest
/// in the `(t_1, t_2)` chart.
pub fn convex_hull(points: &[AffinePoint]) -> Vec<AffinePoint> {
    let mut pts: Vec<(Q, Q, usize)> = points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let (a, b) = p.exact_chart();
            (a, b, k)
        })
        .collect();
    pts.sort_by(|a, b| match a.0.cmp(&b.0) {
        Ordering::Equal => a.1.cmp(&b.1),
        o => o,
    });
    pts.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    if pts.len() < 3 {
        return pts.into_iter().map(|(_, _, k)| points[k].clone()).collect();
    }
    let turn = |o: &(Q, Q, usize), a: &(Q, Q, usize), b: &(Q, Q, usize)| {
        let oa = (&a.0 - &o.0, &a.1 - &o.1);
        let ob = (&b.0 - &o.0, &b.1 - &o.1);
        cross2(&oa, &ob)
    };
    let mut lower: Vec<(Q, Q, usize)> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<(Q, Q, usize)> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower
        .into_iter()
        .chain(upper)
        .map(|(_, _, k)| points[k].clone())
        .collect()
}

/// `C(2n, n)`, the largest facet count of an `n`-dimensional Wasserstein ball.
pub fn facet_count_bound(n: u64) -> u64 {
    num_integer::binomial(2 * n, n)
}

/// The three edge directions of a planar Wasserstein ball, in order:
/// `(e1-e2)/d12 - (e1-e3)/d13`, `(e1-e3)/d13 - (e2-e3)/d23`,
/// `(e1-e2)/d12 - (e3-e2)/d23`.
pub fn edge_directions(d: &FiniteMetric) -> Result<[DirectionVector; 3], BallError> {
    if d.n_states() != 3 {
        return Err(BallError::NotPlanar(d.n_states()));
    }
    let g = |i: usize, j: usize| {
        let scale = Q::from_integer(1.into()) / d.get(i, j);
        DirectionVector::edge(3, i, j, &scale)
    };
    Ok([g(0, 1).sub(&g(0, 2)), g(0, 2).sub(&g(1, 2)), g(0, 1).sub(&g(2, 1))])
}

/// The norm of a planar ball written as a maximum of linear functionals, one
/// per facet: `|delta| = max_f <a_f, delta>`. Evaluating it costs one dot
/// product per facet, which is what the raster path needs.
#[derive(Debug, Clone)]
pub struct FacetNorm {
    unit_ball: PolyBall,
    functionals: Vec<DirectionVector>,
    functionals_f64: Vec<[f64; 3]>,
}

impl FacetNorm {
    pub fn from_metric(d: &FiniteMetric) -> Result<Self, BallError> {
        if d.n_states() != 3 {
            return Err(BallError::NotPlanar(d.n_states()));
        }
        Self::from_generators(ball_generators(d))
    }

    pub fn from_generators(generators: Vec<DirectionVector>) -> Result<Self, BallError> {
        let center = AffinePoint::barycenter(3);
        let unit_ball = PolyBall::from_generators(&center, &rational::int(1), generators)?;
        if !unit_ball.is_planar() {
            return Err(BallError::NotPlanar(center.coords().len()));
        }
        let functionals: Vec<DirectionVector> = unit_ball
            .edges
            .iter()
            .map(|e| {
                let outward = e.inward_normal.neg();
                let height = outward.dot(&unit_ball.hull_vertices[e.start].sub(&center));
                outward.scale(&(Q::from_integer(1.into()) / height))
            })
            .collect();
        let functionals_f64 = functionals
            .iter()
            .map(|a| {
                let v = a.to_f64();
                [v[0], v[1], v[2]]
            })
            .collect();
        Ok(Self {
            unit_ball,
            functionals,
            functionals_f64,
        })
    }

    pub fn unit_ball(&self) -> &PolyBall {
        &self.unit_ball
    }

    pub fn facet_count(&self) -> usize {
        self.functionals.len()
    }

    pub fn functionals(&self) -> &[DirectionVector] {
        &self.functionals
    }

    pub fn functionals_f64(&self) -> &[[f64; 3]] {
        &self.functionals_f64
    }

    /// Exact norm of a direction.
    pub fn norm(&self, delta: &DirectionVector) -> Q {
        self.functionals
            .iter()
            .map(|a| a.dot(delta))
            .max()
            .expect("a planar ball has facets")
    }

    pub fn distance(&self, x: &AffinePoint, y: &AffinePoint) -> Q {
        self.norm(&y.sub(x))
    }

    pub fn norm_f64(&self, delta: &[f64; 3]) -> f64 {
        self.functionals_f64
            .iter()
            .map(|a| a[0] * delta[0] + a[1] * delta[1] + a[2] * delta[2])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn distance_f64(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        self.norm_f64(&[y[0] - x[0], y[1] - x[1], y[2] - x[2]])
    }

    /// Midpoint of facet `f` of the unit ball, as an offset from its center.
    pub fn facet_midpoint(&self, f: usize) -> DirectionVector {
        let b = &self.unit_ball;
        let e = &b.edges[f];
        let half = rational::q(1, 2);
        b.hull_vertices[e.start]
            .sub(&b.center)
            .add(&b.hull_vertices[e.end].sub(&b.center))
            .scale(&half)
    }
}
