//! Deterministic SVG sections.
//!
//! All plots share a 640 x 480 viewport with a 60 px margin. Locus plots map
//! `theta` to the horizontal axis on `[-pi, pi]` and `R1` to the vertical
//! axis on `[-R1_MAX, R1_MAX]`; values outside are clamped to the frame.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::CliError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
pub const R1_MAX: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Section {
    /// `theta,R11,R12` rows: boundary curves and shaded cut-locus region.
    CutLocus,
    /// Point cloud projected onto the `(theta, R1)` plane.
    Caustic,
    /// Point cloud sliced at `theta` and drawn in the `(R1, R2)` plane.
    Sphere,
}

/// Reads a CSV whose header must start with `expected`; returns the numeric
/// rows. Errors carry the 1-based line number.
pub fn read_table(text: &str, expected: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| CliError::Parse { line: 1, msg: e.to_string() })?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got.len() < expected.len() || got[..expected.len()] != *expected {
        return Err(CliError::Parse {
            line: 1,
            msg: format!("expected header {}, found {}", expected.join(","), got.join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| CliError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(expected.len());
        for (i, field) in rec.iter().take(expected.len()).enumerate() {
            let v = field.trim().parse::<f64>().map_err(|_| CliError::Parse {
                line,
                msg: format!("column {} is not a number: {field:?}", expected[i]),
            })?;
            row.push(v);
        }
        if row.len() < expected.len() {
            return Err(CliError::Parse { line, msg: format!("expected {} columns", expected.len()) });
        }
        rows.push(row);
    }
    Ok(rows)
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let x = x.clamp(self.x0, self.x1);
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        let y = y.clamp(self.y0, self.y1);
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    /// Fits a frame around the points with 5 % padding; `[-1, 1]` if empty.
    fn fit(points: &[(f64, f64)]) -> Self {
        let finite: Vec<_> = points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
        if finite.is_empty() {
            return Self { x0: -1.0, x1: 1.0, y0: -1.0, y1: 1.0 };
        }
        let span = |v: Vec<f64>| {
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
            (lo - pad, hi + pad)
        };
        let (x0, x1) = span(finite.iter().map(|p| p.0).collect());
        let (y0, y1) = span(finite.iter().map(|p| p.1).collect());
        Self { x0, x1, y0, y1 }
    }
}

fn header(title: &str, frame: &Frame, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{l:.2}" y="{t:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        r - l,
        b - t
    );
    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut s, l, b + 18.0, "middle", &format!("{:.2}", frame.x0));
    label(&mut s, r, b + 18.0, "middle", &format!("{:.2}", frame.x1));
    label(&mut s, l - 6.0, b, "end", &format!("{:.2}", frame.y0));
    label(&mut s, l - 6.0, t + 4.0, "end", &format!("{:.2}", frame.y1));
    label(&mut s, WIDTH / 2.0, HEIGHT - 16.0, "middle", xlabel);
    label(&mut s, 16.0, HEIGHT / 2.0, "middle", ylabel);
    s
}

fn polyline(points: &[(f64, f64)], frame: &Frame, style: &str) -> String {
    let pts: Vec<String> = points
        .iter()
        .filter(|(x, y)| !x.is_nan() && !y.is_nan())
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    if pts.len() < 2 {
        return String::new();
    }
    format!("<polyline points=\"{}\" fill=\"none\" {style}/>\n", pts.join(" "))
}

/// Cut-locus section from `theta,R11,R12` rows.
pub fn cut_locus(rows: &[Vec<f64>]) -> String {
    let frame = Frame { x0: -PI, x1: PI, y0: -R1_MAX, y1: R1_MAX };
    let mut s = header("Cut locus, R2 = 0", &frame, "theta", "R1");
    let mut curve: Vec<(f64, f64, f64)> = rows.iter().map(|r| (r[0], r[1], r[2])).collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));

    if curve.len() >= 2 {
        for sign in [1.0, -1.0] {
            let edge = sign * R1_MAX;
            let mut poly: Vec<String> = vec![format!("{:.2},{:.2}", frame.px(curve[0].0), frame.py(edge))];
            poly.extend(curve.iter().map(|c| format!("{:.2},{:.2}", frame.px(c.0), frame.py(sign * c.1))));
            poly.push(format!("{:.2},{:.2}", frame.px(curve[curve.len() - 1].0), frame.py(edge)));
            let _ = writeln!(s, r##"<polygon points="{}" fill="#f4c7a1" stroke="none"/>"##, poly.join(" "));
        }
    }
    for sign in [1.0, -1.0] {
        let r11: Vec<_> = curve.iter().map(|c| (c.0, sign * c.1)).collect();
        let r12: Vec<_> = curve.iter().map(|c| (c.0, sign * c.2)).collect();
        s += &polyline(&r11, &frame, r##"stroke="#b03020" stroke-width="2""##);
        s += &polyline(&r12, &frame, r##"stroke="#2050b0" stroke-width="1.5" stroke-dasharray="6 4""##);
    }
    for x in [-PI, PI] {
        s += &polyline(&[(x, -R1_MAX), (x, R1_MAX)], &frame, r#"stroke="black" stroke-width="3""#);
    }
    s += "</svg>\n";
    s
}

fn scatter(title: &str, points: &[(f64, f64)], frame: &Frame, xlabel: &str, ylabel: &str) -> String {
    let mut s = header(title, frame, xlabel, ylabel);
    for &(x, y) in points {
        if x.is_finite() && y.is_finite() {
            let _ = writeln!(s, r##"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="#204080"/>"##, frame.px(x), frame.py(y));
        }
    }
    s += "</svg>\n";
    s
}

fn signed(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Caustic points (`x,y,theta,R1,R2` rows) projected onto `(theta, R1)`.
pub fn caustic(rows: &[Vec<f64>]) -> String {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (signed(r[2]), r[3])).collect();
    let frame = Frame { x0: -PI, x1: PI, y0: -R1_MAX, y1: R1_MAX };
    scatter("Caustic, projection to (theta, R1)", &pts, &frame, "theta", "R1")
}

/// Points (`x,y,theta,R1,R2` rows) with `|theta - theta0| <= band`, in
/// the `(R1, R2)` plane.
pub fn sphere(rows: &[Vec<f64>], theta0: f64, band: f64) -> String {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| signed(r[2] - theta0).abs() <= band)
        .map(|r| (r[3], r[4]))
        .collect();
    let frame = Frame::fit(&pts);
    scatter(&format!("Section theta = {theta0:.4}"), &pts, &frame, "R1", "R2")
}
