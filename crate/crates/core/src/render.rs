//! PPM and SVG output in the equilateral chart.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::ball::PolyBall;
use crate::curve::ParametricCurve;
use crate::point;
use crate::voronoi::{Label, VoronoiRaster};

const PALETTE: [[u8; 3]; 12] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [170, 110, 40],
];

pub fn label_color(label: Option<Label>) -> [u8; 3] {
    match label {
        None => [255, 255, 255],
        Some(Label::Tie) => [0, 0, 0],
        Some(Label::Sample(i)) => PALETTE[i % PALETTE.len()],
    }
}

/// Binary PPM (P6), one pixel per raster cell.
pub fn write_ppm<W: Write>(raster: &VoronoiRaster, out: &mut W) -> io::Result<()> {
    let r = raster.resolution;
    write!(out, "P6\n{r} {r}\n255\n")?;
    let mut bytes = Vec::with_capacity(3 * r * r);
    for l in &raster.labels {
        bytes.extend_from_slice(&label_color(*l));
    }
    out.write_all(&bytes)
}

const SIZE: f64 = 500.0;
const MARGIN: f64 = 20.0;

fn svg_xy(t: &[f64; 3]) -> (f64, f64) {
    let (x, y) = point::to_plot(t);
    (MARGIN + SIZE * x, MARGIN + SIZE * (point::to_plot(&[0.0, 1.0, 0.0]).1 - y))
}

fn polygon(points: &[[f64; 3]]) -> String {
    points
        .iter()
        .map(|p| {
            let (x, y) = svg_xy(p);
            format!("{x:.3},{y:.3}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn header() -> String {
    let h = SIZE * point::to_plot(&[0.0, 1.0, 0.0]).1 + 2.0 * MARGIN;
    let w = SIZE + 2.0 * MARGIN;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n"
    );
    let corners = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let _ = writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        polygon(&corners)
    );
    s
}

fn ball_polygon(ball: &PolyBall) -> String {
    let pts: Vec<[f64; 3]> = ball
        .hull_vertices
        .iter()
        .map(|v| point::to_array3(&v.to_f64()))
        .collect();
    format!(
        "  <polygon points=\"{}\" fill=\"#4682b4\" fill-opacity=\"0.35\" stroke=\"#1f3f66\" stroke-width=\"1.5\"/>\n",
        polygon(&pts)
    )
}

/// The simplex with a planar ball drawn inside it.
pub fn ball_svg(ball: &PolyBall) -> String {
    let mut s = header();
    s.push_str(&ball_polygon(ball));
    let (cx, cy) = svg_xy(&point::to_array3(&ball.center.to_f64()));
    let _ = writeln!(s, "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"3\" fill=\"black\"/>");
    s.push_str("</svg>\n");
    s
}

/// The simplex, the curve, marked tangency parameters and optionally a ball.
pub fn overlay_svg(curve: &dyn ParametricCurve, tangency: &[f64], ball: Option<&PolyBall>) -> String {
    let mut s = header();
    if let Some(b) = ball {
        s.push_str(&ball_polygon(b));
    }
    let pts: Vec<[f64; 3]> = (0..=400).map(|i| curve.eval(i as f64 / 400.0)).collect();
    let _ = writeln!(
        s,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#b22222\" stroke-width=\"2\"/>",
        polygon(&pts)
    );
    for p in tangency {
        let (x, y) = svg_xy(&curve.eval(*p));
        let _ = writeln!(s, "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"black\"/>");
    }
    s.push_str("</svg>\n");
    s
}
