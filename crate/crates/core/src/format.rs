//! JSON file formats.
//!
//! * matrix: `{"dim": d, "entries": [[..d rational strings..], ..]}`;
//!   entries may also be JSON integers, strings may contain whitespace.
//! * flag: `{"frame": matrix}`; a flags file is a list of flags.
//! * sample: list of `{"point": [p, q], "frame": matrix}`.
//! * points: list of `[p, q]`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::flags::Flag;
use crate::linalg::{parse_rational, Matrix, Rational};
use crate::reps::{MoebiusElement, ProjectivePoint};
use crate::tuples::FlagMapSample;

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Text(String),
    Integer(i64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixIn {
    dim: usize,
    entries: Vec<Vec<Entry>>,
}

#[derive(Serialize)]
struct MatrixOut {
    dim: usize,
    entries: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlagIn {
    frame: MatrixIn,
}

#[derive(Serialize)]
struct FlagOut {
    frame: MatrixOut,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleIn {
    point: [i64; 2],
    frame: MatrixIn,
}

#[derive(Serialize)]
struct SampleOut {
    point: [i64; 2],
    frame: MatrixOut,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn build(doc: MatrixIn) -> Result<Matrix> {
    if doc.dim == 0 {
        return Err(Error::Parse("dim must be positive".into()));
    }
    if doc.entries.len() != doc.dim || doc.entries.iter().any(|r| r.len() != doc.dim) {
        return Err(Error::Parse(format!("entries do not form a {0}x{0} array", doc.dim)));
    }
    let rows = doc
        .entries
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    Entry::Text(t) => parse_rational(&t),
                    Entry::Integer(n) => Ok(Rational::from_integer(n.into())),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

fn out(m: &Matrix) -> MatrixOut {
    MatrixOut { dim: m.dim(), entries: m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() }
}

fn frame_to_flag(m: Matrix, position: usize) -> Result<Flag> {
    Flag::new(m).map_err(|_| Error::Parse(format!("frame {position} is singular")))
}

fn to_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    build(serde_json::from_str(text).map_err(parse_error)?)
}

pub fn write_matrix(m: &Matrix) -> String {
    to_string(&out(m))
}

pub fn matrix_value(m: &Matrix) -> Value {
    serde_json::to_value(out(m)).expect("serializable")
}

/// A 2×2 matrix file as an element of `PGL_2`.
pub fn parse_moebius(text: &str) -> Result<MoebiusElement> {
    let m = parse_matrix(text)?;
    if m.dim() != 2 {
        return Err(Error::Parse(format!("expected a 2x2 matrix, got dim {}", m.dim())));
    }
    MoebiusElement::new(m).map_err(|_| Error::Parse("2x2 matrix is singular".into()))
}

pub fn parse_flag(text: &str) -> Result<Flag> {
    let doc: FlagIn = serde_json::from_str(text).map_err(parse_error)?;
    frame_to_flag(build(doc.frame)?, 1)
}

pub fn write_flag(f: &Flag) -> String {
    to_string(&FlagOut { frame: out(f.frame()) })
}

pub fn parse_flags(text: &str) -> Result<Vec<Flag>> {
    let docs: Vec<FlagIn> = serde_json::from_str(text).map_err(parse_error)?;
    let flags =
        docs.into_iter().enumerate().map(|(i, d)| frame_to_flag(build(d.frame)?, i + 1)).collect::<Result<Vec<_>>>()?;
    if let Some(f) = flags.iter().find(|f| f.dim() != flags[0].dim()) {
        return Err(Error::Parse(format!("flags of dimensions {} and {}", flags[0].dim(), f.dim())));
    }
    Ok(flags)
}

pub fn write_flags(flags: &[Flag]) -> String {
    to_string(&flags.iter().map(|f| FlagOut { frame: out(f.frame()) }).collect::<Vec<_>>())
}

pub fn parse_points(text: &str) -> Result<Vec<ProjectivePoint>> {
    let raw: Vec<[i64; 2]> = serde_json::from_str(text).map_err(parse_error)?;
    raw.into_iter().map(|[p, q]| ProjectivePoint::new(p, q).map_err(|e| Error::Parse(e.to_string()))).collect()
}

pub fn write_points(points: &[ProjectivePoint]) -> String {
    to_string(&points.iter().map(|x| <[i64; 2]>::from(x.coords())).collect::<Vec<_>>())
}

/// Parses a sample file. A repeated point is a precondition violation,
/// not a parse error.
pub fn parse_sample(text: &str) -> Result<FlagMapSample> {
    let docs: Vec<SampleIn> = serde_json::from_str(text).map_err(parse_error)?;
    let mut points = Vec::with_capacity(docs.len());
    let mut flags = Vec::with_capacity(docs.len());
    for (i, doc) in docs.into_iter().enumerate() {
        let [p, q] = doc.point;
        points.push(ProjectivePoint::new(p, q).map_err(|e| Error::Parse(e.to_string()))?);
        flags.push(frame_to_flag(build(doc.frame)?, i + 1)?);
    }
    FlagMapSample::new(points, flags).map_err(|e| match e {
        Error::DimensionMismatch(a, b) => Error::Parse(format!("frames of dimensions {a} and {b}")),
        other => other,
    })
}

pub fn write_sample(sample: &FlagMapSample) -> String {
    to_string(
        &sample
            .points()
            .iter()
            .zip(sample.flags())
            .map(|(x, f)| SampleOut { point: x.coords().into(), frame: out(f.frame()) })
            .collect::<Vec<_>>(),
    )
}
