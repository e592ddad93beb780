//! Raster Voronoi diagrams of sampled curves under planar polyhedral norms,
//! and the geometric certificates that go with them.
//!
//! The raster covers the unit square of the equilateral chart
//! ([`point::to_plot`]) with `R x R` square pixels; pixels whose center is
//! outside the triangle stay unlabeled. Distances go through [`FacetNorm`],
//! the max-of-facet-functionals form of the ball's gauge.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ball::{BallError, Face, FacetNorm, PolyBall};
use crate::curve::ParametricCurve;
use crate::metrics::FiniteMetric;
use crate::point::{self, AffinePoint};
use crate::rational;
use crate::transport;

pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_AREA_THRESHOLD: f64 = 0.001;

/// Points closer than this (Euclidean, barycentric) are the same point.
const COINCIDENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VoronoiError {
    #[error("a curve sample needs at least 2 points, got {0}")]
    TooFewSamples(usize),
    #[error("raster resolution must be at least 16, got {0}")]
    ResolutionTooSmall(usize),
    #[error("sample index {0} out of range")]
    NoSuchSample(usize),
    #[error("no dimension certificate found within {0} trials")]
    NotFound(usize),
    #[error(transparent)]
    Ball(#[from] BallError),
}

impl VoronoiError {
    pub fn kind(&self) -> &'static str {
        match self {
            VoronoiError::TooFewSamples(_) => "TooFewSamples",
            VoronoiError::ResolutionTooSmall(_) => "ResolutionTooSmall",
            VoronoiError::NoSuchSample(_) => "NoSuchSample",
            VoronoiError::NotFound(_) => "NotFound",
            VoronoiError::Ball(e) => e.kind(),
        }
    }
}

/// Finite set of points on a curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub params: Vec<f64>,
    pub points: Vec<[f64; 3]>,
    /// False for a point that coincides with an earlier one (the closing
    /// point of a closed curve). Such points are skipped when classifying,
    /// so a repeated point does not tie with itself.
    pub canonical: Vec<bool>,
}

impl CurveSample {
    /// Sample from explicit points, parameters `i / (len - 1)`.
    pub fn from_points(points: Vec<[f64; 3]>) -> Self {
        let n = points.len();
        let params = (0..n)
            .map(|i| if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 })
            .collect();
        let mut canonical = vec![true; n];
        for i in 0..n {
            canonical[i] = !(0..i).any(|j| canonical[j] && euclid(&points[i], &points[j]) < COINCIDENCE_TOL);
        }
        CurveSample {
            params,
            points,
            canonical,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parameter spacing of a uniform sample.
    pub fn spacing(&self) -> f64 {
        if self.len() < 2 {
            0.0
        } else {
            1.0 / (self.len() - 1) as f64
        }
    }

    /// Index of the sample whose parameter is nearest to `p`.
    pub fn nearest_index(&self, p: f64) -> usize {
        let mut best = 0;
        for (i, q) in self.params.iter().enumerate() {
            if (q - p).abs() < (self.params[best] - p).abs() {
                best = i;
            }
        }
        best
    }

    pub fn affine_point(&self, i: usize) -> Option<AffinePoint> {
        AffinePoint::from_f64_planar(&self.points[i])
    }
}

fn euclid(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// `count` uniformly spaced parameters in `[0, 1]`, endpoints included.
pub fn sample_curve(curve: &dyn ParametricCurve, count: usize) -> Result<CurveSample, VoronoiError> {
    if count < 2 {
        return Err(VoronoiError::TooFewSamples(count));
    }
    let points = (0..count)
        .map(|i| curve.eval(i as f64 / (count - 1) as f64))
        .collect();
    Ok(CurveSample::from_points(points))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    Sample(usize),
    Tie,
}

/// Nearest sample under an arbitrary distance, by linear scan. `Tie` when the
/// two smallest distances (over distinct points) differ by less than
/// `tie_tolerance`.
pub fn classify_by<F>(y: &[f64; 3], sample: &CurveSample, tie_tolerance: f64, mut dist: F) -> Label
where
    F: FnMut(&[f64; 3], &[f64; 3]) -> f64,
{
    let mut best = (f64::INFINITY, usize::MAX);
    let mut second = f64::INFINITY;
    for (i, s) in sample.points.iter().enumerate() {
        if !sample.canonical[i] {
            continue;
        }
        let d = dist(y, s);
        if d < best.0 {
            second = best.0;
            best = (d, i);
        } else if d < second {
            second = d;
        }
    }
    if second - best.0 < tie_tolerance {
        Label::Tie
    } else {
        Label::Sample(best.1)
    }
}

/// Nearest sample under the polyhedral norm.
pub fn classify(y: &[f64; 3], sample: &CurveSample, norm: &FacetNorm, tie_tolerance: f64) -> Label {
    classify_by(y, sample, tie_tolerance, |a, b| norm.distance_f64(b, a))
}

/// Nearest sample under `W_d`, evaluated with the float network simplex.
/// Slow; used as an independent check of [`classify`].
pub fn classify_transport(y: &[f64; 3], sample: &CurveSample, d: &FiniteMetric, tie_tolerance: f64) -> Label {
    let cost = d.to_f64();
    classify_by(y, sample, tie_tolerance, |a, b| {
        let a = a.map(|t| t.max(0.0));
        let mut b = b.map(|t| t.max(0.0));
        let shift = a.iter().sum::<f64>() - b.iter().sum::<f64>();
        b[2] += shift;
        transport::wasserstein_distance_f64(&b, &a, &cost)
            .map(|(c, _)| c)
            .unwrap_or(f64::INFINITY)
    })
}

/// `R x R` labels, row 0 at the top of the drawing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VoronoiRaster {
    pub resolution: usize,
    pub labels: Vec<Option<Label>>,
    pub tie_tolerance: f64,
}

impl VoronoiRaster {
    pub fn get(&self, row: usize, col: usize) -> Option<Label> {
        self.labels[row * self.resolution + col]
    }

    /// Barycentric coordinates of a pixel center.
    pub fn pixel_center(resolution: usize, row: usize, col: usize) -> [f64; 3] {
        let x = (col as f64 + 0.5) / resolution as f64;
        let y = 1.0 - (row as f64 + 0.5) / resolution as f64;
        point::from_plot(x, y)
    }

    /// Pixel counts per sample label.
    pub fn cell_areas(&self, sample_count: usize) -> Vec<usize> {
        let mut areas = vec![0; sample_count];
        for l in self.labels.iter().flatten() {
            if let Label::Sample(i) = l {
                areas[*i] += 1;
            }
        }
        areas
    }

    pub fn tie_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Some(Label::Tie)).count()
    }

    /// Labels whose cell has at least `theta * R^2` pixels, ascending.
    pub fn full_dimensional_labels(&self, sample_count: usize, theta: f64) -> Vec<usize> {
        let min = theta * (self.resolution * self.resolution) as f64;
        self.cell_areas(sample_count)
            .into_iter()
            .enumerate()
            .filter(|&(_, a)| a as f64 >= min)
            .map(|(i, _)| i)
            .collect()
    }

    /// Pixel centers carrying label `i`.
    pub fn cell_pixels(&self, i: usize) -> Vec<[f64; 3]> {
        let r = self.resolution;
        (0..r * r)
            .filter(|k| self.labels[*k] == Some(Label::Sample(i)))
            .map(|k| Self::pixel_center(r, k / r, k % r))
            .collect()
    }
}

fn in_simplex(t: &[f64; 3]) -> bool {
    t.iter().all(|&x| x >= 0.0)
}

/// Raster diagram of `sample` under `W_d` (three states).
pub fn raster_voronoi(sample: &CurveSample, d: &FiniteMetric, resolution: usize) -> Result<VoronoiRaster, VoronoiError> {
    let norm = FacetNorm::from_metric(d)?;
    raster_voronoi_with_norm(sample, &norm, resolution, DEFAULT_TIE_TOLERANCE)
}

/// Raster diagram under any planar polyhedral norm. Rows are classified in
/// parallel; the output does not depend on the thread count.
pub fn raster_voronoi_with_norm(
    sample: &CurveSample,
    norm: &FacetNorm,
    resolution: usize,
    tie_tolerance: f64,
) -> Result<VoronoiRaster, VoronoiError> {
    if resolution < 16 {
        return Err(VoronoiError::ResolutionTooSmall(resolution));
    }
    let funcs = norm.functionals_f64();
    // <a_f, s> for every canonical sample, so a pixel costs one dot product
    // per facet plus one subtraction per (sample, facet).
    let keep: Vec<usize> = (0..sample.len()).filter(|&i| sample.canonical[i]).collect();
    let projected: Vec<f64> = keep
        .iter()
        .flat_map(|&i| {
            let s = sample.points[i];
            funcs.iter().map(move |a| a[0] * s[0] + a[1] * s[1] + a[2] * s[2])
        })
        .collect();
    let k = funcs.len();
    let mut labels = vec![None; resolution * resolution];
    labels
        .par_chunks_mut(resolution)
        .enumerate()
        .for_each(|(row, out)| {
            let mut ay = vec![0.0; k];
            for (col, slot) in out.iter_mut().enumerate() {
                let y = VoronoiRaster::pixel_center(resolution, row, col);
                if !in_simplex(&y) {
                    continue;
                }
                for (f, a) in funcs.iter().enumerate() {
                    ay[f] = a[0] * y[0] + a[1] * y[1] + a[2] * y[2];
                }
                let mut best = (f64::INFINITY, usize::MAX);
                let mut second = f64::INFINITY;
                for (j, proj) in projected.chunks_exact(k).enumerate() {
                    let mut dist = f64::NEG_INFINITY;
                    for f in 0..k {
                        dist = dist.max(ay[f] - proj[f]);
                    }
                    if dist < best.0 {
                        second = best.0;
                        best = (dist, j);
                    } else if dist < second {
                        second = dist;
                    }
                }
                *slot = Some(if second - best.0 < tie_tolerance {
                    Label::Tie
                } else {
                    Label::Sample(keep[best.1])
                });
            }
        });
    Ok(VoronoiRaster {
        resolution,
        labels,
        tie_tolerance,
    })
}

/// True iff every curve point within Euclidean chart distance `r` of `x`
/// (other than `x`) lies strictly on one side of the line through `x` with
/// chart normal `normal`. The curve is sampled at `sample_density + 1`
/// uniform parameters.
pub fn half_ball_test(
    x: &[f64; 3],
    normal: (f64, f64),
    curve: &dyn ParametricCurve,
    r: f64,
    sample_density: usize,
) -> bool {
    let xc = point::to_plot(x);
    let mut side = 0.0f64;
    for i in 0..=sample_density.max(1) {
        let pc = point::to_plot(&curve.eval(i as f64 / sample_density.max(1) as f64));
        let (dx, dy) = (pc.0 - xc.0, pc.1 - xc.1);
        let dist = (dx * dx + dy * dy).sqrt();
        if dist <= COINCIDENCE_TOL || dist > r {
            continue;
        }
        let s = normal.0 * dx + normal.1 * dy;
        if s == 0.0 || s * side < 0.0 {
            return false;
        }
        side = s.signum();
    }
    true
}

/// Witness that the Voronoi cell of `x` has dimension at least
/// `face_dim + 1`: the ball of radius `epsilon` around `witness_y` meets the
/// sample only at `x`, and `x` is in the relative interior of facet `facet`
/// of that ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionCertificate {
    pub sample_index: usize,
    pub x: [f64; 3],
    pub witness_y: [f64; 3],
    pub epsilon: f64,
    pub facet: usize,
    pub face_dim: usize,
    pub claimed_lower_bound: usize,
}

/// Search parameters for [`dimension_certificate`].
#[derive(Debug, Clone, Copy)]
pub struct CertificateSearch {
    /// Largest radius tried.
    pub initial_radius: f64,
    /// Ratio between consecutive radii.
    pub shrink: f64,
    /// Radii below this multiple of the distance from `x` to its nearest
    /// other sample are not tried: any point of a finite set has a
    /// full-dimensional cell at that scale.
    pub min_radius_factor: f64,
    /// Total number of (facet, radius) trials.
    pub budget: usize,
    pub tie_tolerance: f64,
}

impl Default for CertificateSearch {
    fn default() -> Self {
        CertificateSearch {
            initial_radius: 0.25,
            shrink: 0.5,
            min_radius_factor: 10.0,
            budget: 200,
            tie_tolerance: DEFAULT_TIE_TOLERANCE,
        }
    }
}

/// Look for a ball through sample point `index` that touches the sample only
/// there, with the point in the relative interior of a facet. For each facet
/// `F` of the unit ball, candidates are `y = x - t m_F` with `m_F` the
/// midpoint of `F`, for geometrically decreasing `t`; `x` is then the
/// midpoint of the facet `y + t F` of `B(y, t)`.
pub fn dimension_certificate(
    index: usize,
    sample: &CurveSample,
    norm: &FacetNorm,
    search: &CertificateSearch,
) -> Result<DimensionCertificate, VoronoiError> {
    if index >= sample.len() {
        return Err(VoronoiError::NoSuchSample(index));
    }
    let x = sample.points[index];
    let others: Vec<&[f64; 3]> = sample
        .points
        .iter()
        .enumerate()
        .filter(|&(i, s)| i != index && sample.canonical[i] && euclid(s, &x) >= COINCIDENCE_TOL)
        .map(|(_, s)| s)
        .collect();
    let t_min = others
        .iter()
        .map(|s| norm.distance_f64(&x, s))
        .fold(f64::INFINITY, f64::min);
    let t_min = if t_min.is_finite() {
        search.min_radius_factor * t_min
    } else {
        0.0
    };
    let midpoints: Vec<[f64; 3]> = (0..norm.facet_count())
        .map(|f| point::to_array3(&norm.facet_midpoint(f).to_f64()))
        .collect();

    let mut trials = 0;
    let mut t = search.initial_radius;
    while trials < search.budget && t >= t_min && t > 0.0 {
        for (f, m) in midpoints.iter().enumerate() {
            if trials >= search.budget {
                break;
            }
            trials += 1;
            let y = [x[0] - t * m[0], x[1] - t * m[1], x[2] - t * m[2]];
            if !in_simplex(&y) {
                continue;
            }
            let clear = others
                .iter()
                .all(|s| norm.distance_f64(&y, s) > t + search.tie_tolerance);
            if clear {
                return Ok(DimensionCertificate {
                    sample_index: index,
                    x,
                    witness_y: y,
                    epsilon: t,
                    facet: f,
                    face_dim: 1,
                    claimed_lower_bound: 2,
                });
            }
        }
        t *= search.shrink;
    }
    Err(VoronoiError::NotFound(trials))
}

/// Independent check of a certificate: the LP gauge of the ball generators
/// puts every other sample point farther than `epsilon` from the witness,
/// and exact sign predicates place `x` in the open cone over the claimed
/// facet as seen from the witness.
pub fn verify_certificate(
    cert: &DimensionCertificate,
    sample: &CurveSample,
    norm: &FacetNorm,
    tie_tolerance: f64,
) -> bool {
    let gens: Vec<Vec<f64>> = norm.unit_ball().generators.iter().map(|g| g.to_f64()).collect();
    let far = sample.points.iter().enumerate().all(|(i, s)| {
        if i == cert.sample_index || !sample.canonical[i] || euclid(s, &cert.x) < COINCIDENCE_TOL {
            return true;
        }
        let delta = [
            s[0] - cert.witness_y[0],
            s[1] - cert.witness_y[1],
            s[2] - cert.witness_y[2],
        ];
        match transport::gauge_distance_f64(&delta, &gens) {
            Ok(g) => g > cert.epsilon + tie_tolerance,
            Err(_) => false,
        }
    });
    if !far {
        return false;
    }
    let (Some(y), Some(x)) = (
        AffinePoint::from_f64_planar(&cert.witness_y),
        AffinePoint::from_f64_planar(&cert.x),
    ) else {
        return false;
    };
    let Ok(ball) = PolyBall::from_generators(&y, &rational::int(1), norm.unit_ball().generators.clone()) else {
        return false;
    };
    if cert.facet >= ball.facet_count() || cert.face_dim != 1 || cert.claimed_lower_bound != cert.face_dim + 1 {
        return false;
    }
    // `C_G(y)` is the cone over `-G`, so the cone over facet `F` is `C_{-F}(y)`.
    ball.face_cone_contains(ball.opposite(Face::Edge(cert.facet)), &x)
}

/// True iff every pixel lies in exactly one face cone of `ball` (centered at
/// the cell's sample point).
pub fn face_cone_decomposition_check(cell_pixels: &[AffinePoint], ball: &PolyBall) -> bool {
    let faces = ball.faces();
    cell_pixels
        .iter()
        .all(|p| faces.iter().filter(|&&f| ball.face_cone_contains(f, p)).count() == 1)
}
