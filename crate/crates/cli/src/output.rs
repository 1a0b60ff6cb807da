//! JSON with 17 significant digits and CSV writers for the fixed schemas.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use se2sr_core::synthesis::point_row;
use se2sr_core::{Pose, Trajectory};

/// Writes every float as `d.dddddddddddddddde±x` (17 significant digits).
/// Non-finite values become `null`.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    let mut ser = Serializer::with_formatter(&mut *out, SeventeenDigits);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    out.write_all(b"\n")
}

pub const TRAJECTORY_HEADER: [&str; 6] = ["s", "x", "y", "theta", "u1", "u2"];
pub const POINT_HEADER: [&str; 5] = ["x", "y", "theta", "R1", "R2"];
pub const CUT_LOCUS_HEADER: [&str; 3] = ["theta", "R11", "R12"];

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Writes a header and rows of floats (shortest round-trip decimal form).
pub fn write_csv<const N: usize>(
    out: &mut dyn Write,
    header: [&str; N],
    rows: impl IntoIterator<Item = [f64; N]>,
) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()
}

pub fn trajectory_rows(t: &Trajectory) -> impl Iterator<Item = [f64; 6]> + '_ {
    t.samples
        .iter()
        .map(|s| [s.s, s.pose.x, s.pose.y, s.pose.theta, s.controls.u1, s.controls.u2])
}

pub fn point_rows(points: &[Pose]) -> impl Iterator<Item = [f64; 5]> + '_ {
    points.iter().map(|q| point_row(*q))
}

#[derive(Serialize)]
pub struct SampleJson {
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub u1: f64,
    pub u2: f64,
}

pub fn trajectory_json(t: &Trajectory) -> Vec<SampleJson> {
    trajectory_rows(t)
        .map(|[s, x, y, theta, u1, u2]| SampleJson { s, x, y, theta, u1, u2 })
        .collect()
}

#[derive(Serialize)]
pub struct PointJson {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
}

pub fn points_json(points: &[Pose]) -> Vec<PointJson> {
    point_rows(points)
        .map(|[x, y, theta, r1, r2]| PointJson { x, y, theta, r1, r2 })
        .collect()
}
