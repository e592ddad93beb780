//! The `polyvor` command line. Every subcommand prints one JSON document on
//! stdout; failures print `{"error": {"kind", "message"}}` and exit nonzero.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ball::{self, BallError, FacetNorm};
use crate::counting::{self, CountingError, Regime};
use crate::curve::{self, Circle, CurveError, HardyWeinberg, ParametricCurve};
use crate::fixtures;
use crate::metrics::{FiniteMetric, MetricError};
use crate::point::{self, AffinePoint, PointError};
use crate::rational::{self, ParseRationalError, Q};
use crate::render;
use crate::transport::{self, TransportError};
use crate::voronoi::{self, VoronoiError, VoronoiRaster};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid POLYVOR_THREADS value {0:?}")]
    Threads(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Counting(#[from] CountingError),
    #[error(transparent)]
    Voronoi(#[from] VoronoiError),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Threads(_) => "InvalidThreads",
            CliError::Metric(e) => e.kind(),
            CliError::Rational(_) => "InvalidRational",
            CliError::Point(e) => e.kind(),
            CliError::Transport(e) => e.kind(),
            CliError::Ball(e) => e.kind(),
            CliError::Curve(e) => e.kind(),
            CliError::Counting(e) => e.kind(),
            CliError::Voronoi(e) => e.kind(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}})
    }
}

#[derive(Debug, Parser)]
#[command(name = "polyvor", version, about = "Wasserstein balls and Voronoi cells of curves in the simplex")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Hw,
    Circle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wasserstein distance between two distributions.
    Distance {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
        /// Exact rational solver instead of floating point.
        #[arg(long)]
        exact: bool,
    },
    /// Vertices and edges of a planar Wasserstein ball.
    Ball {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Edge tangencies of the Hardy-Weinberg curve.
    Tangency {
        #[arg(long)]
        metric: PathBuf,
    },
    /// Number of full-dimensional Voronoi cells of the Hardy-Weinberg curve.
    Count {
        #[arg(long)]
        metric: PathBuf,
    },
    /// Upper bound facets * dual degree / 2.
    Bound {
        #[arg(long)]
        facets: u64,
        #[arg(long = "dual-degree")]
        dual_degree: u64,
    },
    /// Raster Voronoi diagram of a sampled curve.
    Raster {
        #[arg(long)]
        metric: PathBuf,
        #[arg(long, value_enum, default_value = "hw")]
        curve: CurveKind,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Area threshold, as a fraction of R^2, for a full-dimensional cell.
        #[arg(long, default_value_t = voronoi::DEFAULT_AREA_THRESHOLD)]
        threshold: f64,
        /// Radius of the circle curve in the drawing chart.
        #[arg(long = "circle-radius", default_value_t = 0.15)]
        circle_radius: f64,
    },
    /// Run the built-in worked examples.
    Check,
}

pub fn load_metric(path: &Path) -> Result<FiniteMetric, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(FiniteMetric::from_json_str(&text)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("POLYVOR_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| CliError::Threads(v.clone()))?;
        if n == 0 {
            return Err(CliError::Threads(v));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Threads(e.to_string()))
}

fn qs(v: &Q) -> Value {
    Value::String(rational::format_rational(v))
}

fn tangency_points(report: &curve::TangencyReport) -> Value {
    report
        .entries
        .iter()
        .map(|e| json!({"p": qs(&e.p_star), "case": e.edge_case.label()}))
        .collect()
}

pub fn run(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Distance { metric, mu, nu, exact } => {
            let d = load_metric(&metric)?;
            let mu = AffinePoint::simplex(rational::parse_vector(&mu)?)?;
            let nu = AffinePoint::simplex(rational::parse_vector(&nu)?)?;
            if exact {
                let (cost, plan) = transport::wasserstein_distance(&mu, &nu, &d)?;
                Ok(json!({"cost": qs(&cost), "plan": plan, "solver": "exact"}))
            } else {
                let (cost, plan) = transport::wasserstein_distance_f64(&mu.to_f64(), &nu.to_f64(), &d.to_f64())?;
                Ok(json!({"cost": cost.to_string(), "plan": plan, "solver": "float"}))
            }
        }
        Command::Ball {
            metric,
            center,
            radius,
            svg,
        } => {
            let d = load_metric(&metric)?;
            let c = AffinePoint::new(rational::parse_vector(&center)?)?;
            let r = rational::parse_rational(&radius)?;
            let b = ball::build_ball(&c, &r, &d)?;
            if let Some(path) = svg {
                if !b.is_planar() {
                    return Err(BallError::NotPlanar(d.n_states()).into());
                }
                write_file(&path, render::ball_svg(&b).as_bytes())?;
            }
            let generators: Vec<Value> = b.generators.iter().map(|g| json!(g)).collect();
            Ok(json!({
                "vertices": b.hull_vertices,
                "edges": b.edges,
                "facet_count": b.facet_count(),
                "generators": generators,
            }))
        }
        Command::Tangency { metric } => {
            let d = load_metric(&metric)?;
            let report = curve::hw_tangency_points(&d)?;
            Ok(json!({"points": tangency_points(&report), "degenerate": report.degenerate}))
        }
        Command::Count { metric } => {
            let d = load_metric(&metric)?;
            let census = counting::count_full_dim_cells_hw(&d)?;
            Ok(json!({
                "count": census.count,
                "regime": census.regime.label(),
                "points": tangency_points(&census.tangency),
                "degenerate": census.tangency.degenerate,
            }))
        }
        Command::Bound { facets, dual_degree } => {
            let b = counting::full_dim_upper_bound(facets, dual_degree)?;
            Ok(json!({"bound": qs(&b)}))
        }
        Command::Raster {
            metric,
            curve,
            samples,
            resolution,
            out,
            svg,
            threshold,
            circle_radius,
        } => {
            let d = load_metric(&metric)?;
            let norm = FacetNorm::from_metric(&d)?;
            let (summary, overlay) = match curve {
                CurveKind::Hw => raster_summary(&HardyWeinberg, &norm, samples, resolution, threshold, &out)?,
                CurveKind::Circle => {
                    raster_summary(&Circle::centered(circle_radius), &norm, samples, resolution, threshold, &out)?
                }
            };
            if let Some(path) = svg {
                write_file(&path, overlay.as_bytes())?;
            }
            Ok(summary)
        }
        Command::Check => Ok(check()),
    }
}

/// Parameters where the curve is tangent to an edge direction of the ball.
pub fn predicted_tangencies(curve: &dyn ParametricCurve, norm: &FacetNorm) -> Vec<f64> {
    let b = norm.unit_ball();
    let k = b.facet_count();
    let mut out: Vec<f64> = (0..k / 2)
        .flat_map(|i| {
            let dir = point::to_array3(&b.edge_vector(i).to_f64());
            curve::planar_tangency_points(curve, &dir, 720)
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

fn raster_summary(
    curve: &dyn ParametricCurve,
    norm: &FacetNorm,
    samples: usize,
    resolution: usize,
    threshold: f64,
    out: &Path,
) -> Result<(Value, String), CliError> {
    let sample = voronoi::sample_curve(curve, samples)?;
    let pool = thread_pool()?;
    let raster = pool.install(|| {
        voronoi::raster_voronoi_with_norm(&sample, norm, resolution, voronoi::DEFAULT_TIE_TOLERANCE)
    })?;
    let mut ppm = Vec::new();
    render::write_ppm(&raster, &mut ppm).expect("writing to memory");
    write_file(out, &ppm)?;
    let areas = raster.cell_areas(sample.len());
    let cells: Vec<Value> = raster
        .full_dimensional_labels(sample.len(), threshold)
        .into_iter()
        .map(|i| json!({"index": i, "p": sample.params[i], "area": areas[i]}))
        .collect();
    let predicted = predicted_tangencies(curve, norm);
    let center = AffinePoint::barycenter(3);
    let overlay_ball = ball::PolyBall::from_generators(
        &center,
        &rational::q(1, 8),
        norm.unit_ball().generators.clone(),
    )?;
    let overlay = render::overlay_svg(curve, &predicted, Some(&overlay_ball));
    let summary = json!({
        "curve": curve.name(),
        "resolution": resolution,
        "samples": samples,
        "threshold": threshold,
        "full_dimensional": cells,
        "predicted": predicted,
        "ties": raster.tie_count(),
    });
    Ok((summary, overlay))
}

fn full_dim_params(curve: &dyn ParametricCurve, norm: &FacetNorm, samples: usize, resolution: usize) -> Vec<f64> {
    let s = voronoi::sample_curve(curve, samples).expect("samples >= 2");
    let r: VoronoiRaster = voronoi::raster_voronoi_with_norm(&s, norm, resolution, voronoi::DEFAULT_TIE_TOLERANCE)
        .expect("resolution >= 16");
    r.full_dimensional_labels(s.len(), voronoi::DEFAULT_AREA_THRESHOLD)
        .into_iter()
        .map(|i| s.params[i])
        .collect()
}

/// The worked examples, each reduced to a pass/fail flag.
pub fn check() -> Value {
    let mut items: Vec<(String, bool)> = Vec::new();
    let third = AffinePoint::barycenter(3);
    let r = rational::q(1, 3);

    let hex = ball::build_ball(&third, &r, &fixtures::ball_d1()).map(|b| b.vertex_count());
    let quad = ball::build_ball(&third, &r, &fixtures::ball_d2()).map(|b| b.vertex_count());
    items.push(("ball d1 is a hexagon, d2 a quadrilateral".into(), hex == Ok(6) && quad == Ok(4)));

    let census = [
        (fixtures::census_d1(), vec![rational::q(1, 2)]),
        (fixtures::census_d2(), vec![rational::q(2, 3), rational::q(4, 5)]),
        (
            fixtures::census_d3(),
            vec![rational::q(1, 3), rational::q(1, 2), rational::q(2, 3)],
        ),
    ];
    for (k, (d, expected)) in census.iter().enumerate() {
        let ok = counting::count_full_dim_cells_hw(d)
            .map(|c| c.tangency.parameters() == *expected && c.count == expected.len())
            .unwrap_or(false);
        items.push((format!("census d{} has {} cells", k + 1, expected.len()), ok));
    }

    let mut table_ok = true;
    for seed in 0..300 {
        let d = crate::metrics::random_metric(3, seed, &rational::int(1));
        let c = counting::count_full_dim_cells_hw(&d).expect("planar metric");
        if let Some(v) = c.regime.table_value() {
            table_ok &= c.count == v;
        }
        table_ok &= c.regime != Regime::Boundary || c.count >= 1;
    }
    items.push(("census table on 300 random metrics".into(), table_ok));

    let bounds = counting::full_dim_upper_bound(6, 2) == Ok(rational::int(6))
        && counting::full_dim_upper_bound(4, 2) == Ok(rational::int(4));
    items.push(("bound F * deg / 2 for F = 6, 4".into(), bounds));

    for (name, d, expected) in [("d1", fixtures::ball_d1(), 6), ("d2", fixtures::ball_d2(), 4)] {
        let norm = FacetNorm::from_metric(&d).expect("planar");
        let cells = full_dim_params(&Circle::centered(0.15), &norm, 1001, 512);
        items.push((format!("circle under {name} has {expected} full-dimensional cells"), cells.len() == expected));
    }

    let lines: Vec<Value> = items
        .iter()
        .map(|(name, pass)| {
            eprintln!("[{}] {name}", if *pass { "PASS" } else { "FAIL" });
            json!({"name": name, "pass": pass})
        })
        .collect();
    json!({"items": lines, "all_pass": items.iter().all(|(_, p)| *p)})
}

/// Runs a parsed command line, printing the result; returns the exit code.
pub fn main_with(cli: Cli) -> i32 {
    let failed_check = matches!(cli.command, Command::Check);
    match run(cli.command) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("JSON value"));
            if failed_check && v["all_pass"] == Value::Bool(false) {
                1
            } else {
                0
            }
        }
        Err(e) => {
            println!("{}", e.to_json());
            eprintln!("error: {e}");
            2
        }
    }
}
