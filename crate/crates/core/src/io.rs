//! Polygon ingestion for the CLI.
//!
//! Two formats: a plain text form with one `x y` vertex per line (`#` starts
//! a comment) and a JSON form `{"vertices": [[x,y], ...]}`. Both round-trip
//! floats bit-exactly: writers emit shortest round-trip decimals and readers
//! parse with correct rounding.

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{GeometryError, Point2, Polygon};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Deserialize)]
struct PolygonFile {
    vertices: Vec<Point2>,
}

/// Parses the text form: one `x y` pair per line, `#` comments, blank lines
/// ignored.
pub fn polygon_from_text(text: &str) -> Result<Polygon, IoError> {
    let mut vertices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse = |field: Option<&str>| -> Result<f64, IoError> {
            let field = field.ok_or_else(|| IoError::Parse {
                line: idx + 1,
                reason: "expected two coordinates".into(),
            })?;
            field.parse().map_err(|e| IoError::Parse {
                line: idx + 1,
                reason: format!("bad number `{field}`: {e}"),
            })
        };
        let x = parse(fields.next())?;
        let y = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(IoError::Parse {
                line: idx + 1,
                reason: "expected exactly two coordinates".into(),
            });
        }
        vertices.push(Point2::new(x, y));
    }
    Ok(Polygon::new(vertices)?)
}

/// Parses the JSON form `{"vertices": [[x,y], ...]}`.
pub fn polygon_from_json(text: &str) -> Result<Polygon, IoError> {
    let file: PolygonFile = serde_json::from_str(text)?;
    Ok(Polygon::new(file.vertices)?)
}

/// Auto-detects the format: JSON when the first non-space byte is `{`.
pub fn polygon_from_str(text: &str) -> Result<Polygon, IoError> {
    if text.trim_start().starts_with('{') {
        polygon_from_json(text)
    } else {
        polygon_from_text(text)
    }
}

/// Writes the text form with shortest round-trip decimals.
pub fn polygon_to_text(polygon: &Polygon) -> String {
    let mut out = String::new();
    for v in polygon.vertices() {
        out.push_str(&format!("{} {}\n", v.x, v.y));
    }
    out
}

/// Writes the JSON form.
pub fn polygon_to_json(polygon: &Polygon) -> String {
    serde_json::json!({ "vertices": polygon.vertices() }).to_string()
}
