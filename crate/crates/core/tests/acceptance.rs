//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL ...` line before asserting.

mod common;

use std::time::{Duration, Instant};

use num_traits::Zero;
use polyvor::ball::{build_ball, FacetNorm};
use polyvor::counting::{count_full_dim_cells_hw, full_dim_upper_bound, Regime};
use polyvor::curve::{hw_tangency_points, Circle, HardyWeinberg, ParametricCurve};
use polyvor::fixtures;
use polyvor::metrics::{random_metric, FiniteMetric};
use polyvor::point::{AffinePoint, DirectionVector};
use polyvor::rational::{self, int, q, Q};
use polyvor::transport::{self, brute_force_distance, gauge_distance, wasserstein_distance};
use polyvor::voronoi::{self, CertificateSearch, CurveSample};

fn report(n: u32, title: &str, pass: bool, detail: String) {
    println!(
        "criterion {n:>2}: {} {title} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

const R: usize = 512;
const SAMPLES: usize = 1001;
const THETA: f64 = 0.001;

#[test]
fn criterion_01_ball_dichotomy() {
    let start = Instant::now();
    let c = AffinePoint::barycenter(3);
    let hex = build_ball(&c, &q(1, 3), &fixtures::ball_d1()).unwrap().vertex_count();
    let quad = build_ball(&c, &q(1, 3), &fixtures::ball_d2()).unwrap().vertex_count();
    let elapsed = start.elapsed();
    report(
        1,
        "hexagon for d1, quadrilateral for d2",
        hex == 6 && quad == 4 && elapsed < Duration::from_secs(1),
        format!("vertices {hex} and {quad}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_worked_census() {
    let cases = [
        (fixtures::census_d1(), vec![q(1, 2)], 1),
        (fixtures::census_d2(), vec![q(2, 3), q(4, 5)], 2),
        (fixtures::census_d3(), vec![q(1, 3), q(1, 2), q(2, 3)], 3),
    ];
    let mut ok = true;
    let mut seen = Vec::new();
    for (d, points, count) in &cases {
        let report = hw_tangency_points(d).unwrap();
        let census = count_full_dim_cells_hw(d).unwrap();
        ok &= report.parameters() == *points && census.count == *count;
        seen.push(format!(
            "{{{}}} -> {}",
            report
                .parameters()
                .iter()
                .map(rational::format_rational)
                .collect::<Vec<_>>()
                .join(", "),
            census.count
        ));
    }
    report(2, "exact tangency parameters and counts", ok, seen.join("; "));
}

/// 1000 metrics, a third of them in each strict regime.
fn stratified_metrics() -> Vec<FiniteMetric> {
    let quota = [333usize, 333, 334];
    let mut buckets: [Vec<FiniteMetric>; 3] = Default::default();
    let mut seed = 10_000u64;
    while buckets.iter().zip(quota).any(|(b, q)| b.len() < q) {
        let d = random_metric(3, seed, &int(1));
        seed += 1;
        let slot = match Regime::of(&d) {
            Regime::StrictCase1 => 0,
            Regime::StrictCase2 => 1,
            Regime::StrictCase3 => 2,
            Regime::Boundary => continue,
        };
        if buckets[slot].len() < quota[slot] {
            buckets[slot].push(d);
        }
    }
    buckets.into_iter().flatten().collect()
}

#[test]
fn criterion_03_census_table() {
    let metrics = stratified_metrics();
    let mut agree = 0;
    for d in &metrics {
        let census = count_full_dim_cells_hw(d).unwrap();
        let table = census.regime.table_value().expect("strict regime");
        if census.count == table && census.count == census.tangency.entries.len() {
            agree += 1;
        }
    }
    report(
        3,
        "census equals the regime table",
        agree == metrics.len() && metrics.len() == 1000,
        format!("{agree}/{} metrics", metrics.len()),
    );
}

#[test]
fn criterion_04_solver_oracles() {
    let start = Instant::now();
    let mut rng = common::rng(4);
    let mut exact_ok = 0;
    let mut float_ok = 0;
    let mut worst = 0.0f64;
    for k in 0..200u64 {
        let n_states = if k % 2 == 0 { 3 } else { 4 };
        let d = random_metric(n_states, 400 + k, &int(1));
        let mu = common::random_simplex_point(&mut rng, n_states);
        let nu = common::random_simplex_point(&mut rng, n_states);
        let (w, plan) = wasserstein_distance(&mu, &nu, &d).unwrap();
        let brute = brute_force_distance(&mu, &nu, &d).unwrap();
        if w == brute && plan.is_feasible() && plan.cost(&d) == w {
            exact_ok += 1;
        }
        let gens: Vec<Vec<f64>> = polyvor::ball::ball_generators(&d).iter().map(|g| g.to_f64()).collect();
        let delta: Vec<f64> = nu.sub(&mu).to_f64();
        let g = transport::gauge_distance_f64(&delta, &gens).unwrap();
        let err = (g - rational::to_f64(&w)).abs();
        worst = worst.max(err);
        if err <= 1e-9 {
            float_ok += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        4,
        "network simplex vs enumeration vs gauge",
        exact_ok == 200 && float_ok == 200 && elapsed < Duration::from_secs(30),
        format!("exact {exact_ok}/200, float {float_ok}/200, worst {worst:.1e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_05_vertex_recovery() {
    let mut checked = 0;
    let mut ok = 0;
    for k in 0..100u64 {
        let n_states = if k % 2 == 0 { 3 } else { 4 };
        let d = random_metric(n_states, 500 + k, &int(1));
        for i in 0..n_states {
            for j in 0..n_states {
                let (w, _) = wasserstein_distance(
                    &AffinePoint::vertex(n_states, i),
                    &AffinePoint::vertex(n_states, j),
                    &d,
                )
                .unwrap();
                checked += 1;
                if &w == d.get(i, j) {
                    ok += 1;
                }
            }
        }
    }
    report(5, "W(e_i, e_j) = d_ij", ok == checked, format!("{ok}/{checked} pairs"));
}

/// Parameters of the labels above the area threshold.
fn full_dim_params(sample: &CurveSample, norm: &FacetNorm, resolution: usize) -> Vec<f64> {
    let raster =
        voronoi::raster_voronoi_with_norm(sample, norm, resolution, voronoi::DEFAULT_TIE_TOLERANCE).unwrap();
    raster
        .full_dimensional_labels(sample.len(), THETA)
        .into_iter()
        .map(|i| sample.params[i])
        .collect()
}

fn matches_one_to_one(found: &[f64], predicted: &[f64], tol: f64, circular: bool) -> bool {
    let gap = |a: f64, b: f64| {
        let g = (a - b).abs();
        if circular {
            g.min(1.0 - g)
        } else {
            g
        }
    };
    found.len() == predicted.len()
        && predicted
            .iter()
            .all(|p| found.iter().filter(|f| gap(**f, *p) <= tol).count() == 1)
}

#[test]
fn criterion_06_raster_confirms_census() {
    let sample = voronoi::sample_curve(&HardyWeinberg, SAMPLES).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, d) in [
        ("d1", fixtures::census_d1()),
        ("d2", fixtures::census_d2()),
        ("d3", fixtures::census_d3()),
    ] {
        let start = Instant::now();
        let norm = FacetNorm::from_metric(&d).unwrap();
        let found = full_dim_params(&sample, &norm, R);
        let elapsed = start.elapsed();
        let predicted: Vec<f64> = hw_tangency_points(&d)
            .unwrap()
            .parameters()
            .iter()
            .map(rational::to_f64)
            .collect();
        let good = matches_one_to_one(&found, &predicted, 0.002, false) && elapsed < Duration::from_secs(120);
        ok &= good;
        lines.push(format!("{name}: found {found:?} predicted {predicted:.4?} in {elapsed:.2?}"));
    }
    report(6, "raster cells above 0.001 R^2 match p*", ok, lines.join("; "));
}

#[test]
fn criterion_07_circle_tightness() {
    let circle = Circle::centered(0.15);
    let sample = voronoi::sample_curve(&circle, SAMPLES).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, d) in [("d1", fixtures::ball_d1()), ("d2", fixtures::ball_d2())] {
        let norm = FacetNorm::from_metric(&d).unwrap();
        let facets = build_ball(&AffinePoint::barycenter(3), &int(1), &d).unwrap().facet_count() as u64;
        let bound = full_dim_upper_bound(facets, 2).unwrap();
        let found = full_dim_params(&sample, &norm, R);
        let predicted = polyvor::cli::predicted_tangencies(&circle, &norm);
        let good = Q::from_integer((found.len() as i64).into()) == bound
            && matches_one_to_one(&found, &predicted, 2.0 * sample.spacing(), true);
        ok &= good;
        lines.push(format!("{name}: {} cells, bound {bound}, F = {facets}", found.len()));
    }
    report(7, "circle attains F * deg / 2", ok, lines.join("; "));
}

#[test]
fn criterion_08_bound_never_violated() {
    let c = AffinePoint::barycenter(3);
    let mut ok = 0;
    let mut facet_counts = std::collections::BTreeSet::new();
    for seed in 0..1000u64 {
        let d = random_metric(3, 8000 + seed, &int(1));
        let facets = build_ball(&c, &int(1), &d).unwrap().facet_count() as u64;
        facet_counts.insert(facets);
        let count = count_full_dim_cells_hw(&d).unwrap().count;
        let bound = full_dim_upper_bound(facets, 2).unwrap();
        if Q::from_integer((count as i64).into()) <= bound && (facets == 4 || facets == 6) {
            ok += 1;
        }
    }
    report(
        8,
        "census <= full_dim_upper_bound(F, 2)",
        ok == 1000,
        format!("{ok}/1000 metrics, facet counts seen {facet_counts:?}"),
    );
}

#[test]
fn criterion_09_property_suites() {
    let mut rng = common::rng(9);
    // W_d is a metric.
    let mut axioms = 0;
    for k in 0..500u64 {
        let d = random_metric(3, 900 + k, &int(1));
        let x = common::random_simplex_point(&mut rng, 3);
        let y = common::random_simplex_point(&mut rng, 3);
        let z = common::random_simplex_point(&mut rng, 3);
        let w = |a: &AffinePoint, b: &AffinePoint| wasserstein_distance(a, b, &d).unwrap().0;
        let (xy, yx, xz, zy, xx) = (w(&x, &y), w(&y, &x), w(&x, &z), w(&z, &y), w(&x, &x));
        let identity = (xy.is_zero()) == (x == y) && xx.is_zero();
        if identity && xy == yx && xy >= Q::zero() && xy <= &xz + &zy {
            axioms += 1;
        }
    }
    // Face cones partition the plane.
    let mut partition = 0;
    let d = fixtures::census_d2();
    let x = AffinePoint::simplex(vec![q(1, 4), q(1, 2), q(1, 4)]).unwrap();
    let ball = build_ball(&x, &q(1, 5), &d).unwrap();
    for _ in 0..1000 {
        let y = x.translate(&common::random_direction(&mut rng));
        let hits = ball.faces().into_iter().filter(|&f| ball.face_cone_contains(f, &y)).count();
        if hits == 1 {
            partition += 1;
        }
    }
    // Central symmetry and scaling.
    let mut shape = 0;
    for k in 0..100u64 {
        let d = random_metric(3, 1900 + k, &int(1));
        let c = common::random_simplex_point(&mut rng, 3);
        let r = q(rng_int(&mut rng, 1, 9), rng_int(&mut rng, 1, 9));
        let unit = build_ball(&c, &int(1), &d).unwrap();
        let scaled = build_ball(&c, &r, &d).unwrap();
        let rel = |b: &polyvor::PolyBall| -> Vec<DirectionVector> {
            b.hull_vertices.iter().map(|v| v.sub(&b.center)).collect()
        };
        let (u, s) = (rel(&unit), rel(&scaled));
        let symmetric = u.iter().all(|v| u.contains(&v.neg()));
        let scales = u.len() == s.len() && u.iter().zip(&s).all(|(a, b)| a.scale(&r) == *b);
        if symmetric && scales {
            shape += 1;
        }
    }
    // Tangents agree with central differences.
    let curves: [&dyn ParametricCurve; 2] = [&HardyWeinberg, &Circle::centered(0.15)];
    let mut worst = 0.0f64;
    for c in curves {
        for k in 1..200 {
            let p = k as f64 / 200.0;
            let h = 1e-6;
            let (a, b, t) = (c.eval(p + h), c.eval(p - h), c.tangent(p));
            let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
            let err = (0..3).map(|i| ((a[i] - b[i]) / (2.0 * h) - t[i]).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(err / norm);
        }
    }
    report(
        9,
        "metric axioms, face-cone partition, ball symmetry and scaling, tangents",
        axioms == 500 && partition == 1000 && shape == 100 && worst <= 1e-6,
        format!("axioms {axioms}/500, partition {partition}/1000, balls {shape}/100, tangent error {worst:.1e}"),
    );
}

fn rng_int(rng: &mut rand_chacha::ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    use rand::Rng;
    rng.gen_range(lo..=hi)
}

#[test]
fn criterion_10_dimension_certificates() {
    let sample = voronoi::sample_curve(&HardyWeinberg, SAMPLES).unwrap();
    let search = CertificateSearch::default();
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, d) in [
        ("d1", fixtures::census_d1()),
        ("d2", fixtures::census_d2()),
        ("d3", fixtures::census_d3()),
    ] {
        let norm = FacetNorm::from_metric(&d).unwrap();
        let predicted: Vec<f64> = hw_tangency_points(&d)
            .unwrap()
            .parameters()
            .iter()
            .map(rational::to_f64)
            .collect();
        let mut certified = 0;
        for p in &predicted {
            let i = sample.nearest_index(*p);
            if let Ok(cert) = voronoi::dimension_certificate(i, &sample, &norm, &search) {
                if cert.claimed_lower_bound == 2
                    && voronoi::verify_certificate(&cert, &sample, &norm, voronoi::DEFAULT_TIE_TOLERANCE)
                {
                    certified += 1;
                }
            }
        }
        // Ten parameters at least 0.05 away from every p*.
        let others: Vec<f64> = (1..40)
            .map(|k| k as f64 * 0.025)
            .filter(|p| predicted.iter().all(|s| (s - p).abs() >= 0.05))
            .take(10)
            .collect();
        let not_found = others
            .iter()
            .filter(|p| {
                matches!(
                    voronoi::dimension_certificate(sample.nearest_index(**p), &sample, &norm, &search),
                    Err(voronoi::VoronoiError::NotFound(_))
                )
            })
            .count();
        ok &= certified == predicted.len() && others.len() == 10 && not_found == 10;
        lines.push(format!(
            "{name}: certified {certified}/{}, not found {not_found}/{}",
            predicted.len(),
            others.len()
        ));
    }
    report(10, "certificates at p*, none elsewhere", ok, lines.join("; "));
}

#[test]
fn gauge_and_transport_agree_on_worked_points() {
    let d = fixtures::census_d3();
    let gens = polyvor::ball::ball_generators(&d);
    let x = AffinePoint::simplex(vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
    let y = AffinePoint::simplex(vec![q(1, 9), q(4, 9), q(4, 9)]).unwrap();
    assert_eq!(gauge_distance(&x, &y, &gens).unwrap(), wasserstein_distance(&x, &y, &d).unwrap().0);
}
