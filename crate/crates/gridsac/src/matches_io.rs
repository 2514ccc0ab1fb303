//! The matches file format.
//!
//! One correspondence per line, whitespace-separated:
//!
//! ```text
//! # any comment
//! extent1 640 480
//! extent2 640 480
//! x1 y1 x2 y2 [score]
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. The optional
//! `extent1 w h` / `extent2 w h` headers declare image domains anchored at
//! the origin; when absent, extents default to the tight bounding boxes of
//! the parsed points. Scores, when present, must be in `[0, 1]`.

use crate::error::{GridsacError, Result};
use crate::geometry::{Aabb2, Point2};
use crate::models::Correspondence;
use std::io::Write;
use std::path::Path;

/// Parsed matches plus the image extents (declared or derived).
#[derive(Debug, Clone)]
pub struct ParsedMatches {
    pub corrs: Vec<Correspondence>,
    pub extent_1: Aabb2,
    pub extent_2: Aabb2,
    /// True when the extents came from file headers rather than the points.
    pub declared_extents: bool,
}

/// Parse a matches file from disk.
pub fn parse_matches(path: &Path) -> Result<ParsedMatches> {
    let text = std::fs::read_to_string(path)?;
    parse_matches_str(&text)
}

/// Parse the matches format from a string (line numbers are 1-based).
pub fn parse_matches_str(text: &str) -> Result<ParsedMatches> {
    let mut corrs = Vec::new();
    let mut extent_1 = None;
    let mut extent_2 = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "extent1" || fields[0] == "extent2" {
            if fields.len() != 3 {
                return Err(GridsacError::Parse {
                    line: line_no,
                    msg: format!("{} header needs exactly `w h`", fields[0]),
                });
            }
            let w: f64 = parse_field(fields[1], line_no)?;
            let h: f64 = parse_field(fields[2], line_no)?;
            if !(w > 0.0 && h > 0.0) {
                return Err(GridsacError::Parse {
                    line: line_no,
                    msg: format!("non-positive extent {w} x {h}"),
                });
            }
            let e = Aabb2::new(Point2::new(0.0, 0.0), Point2::new(w, h));
            if fields[0] == "extent1" {
                extent_1 = Some(e);
            } else {
                extent_2 = Some(e);
            }
            continue;
        }
        if fields.len() != 4 && fields.len() != 5 {
            return Err(GridsacError::Parse {
                line: line_no,
                msg: format!("expected 4 or 5 numeric fields, got {}", fields.len()),
            });
        }
        let nums: Vec<f64> = fields
            .iter()
            .map(|f| parse_field(f, line_no))
            .collect::<Result<_>>()?;
        let score = if nums.len() == 5 { Some(nums[4]) } else { None };
        let c = Correspondence::new(
            Point2::new(nums[0], nums[1]),
            Point2::new(nums[2], nums[3]),
            score,
        )
        .map_err(|e| GridsacError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        corrs.push(c);
    }
    let bbox_1 = Aabb2::from_points(corrs.iter().map(|c| c.p));
    let bbox_2 = Aabb2::from_points(corrs.iter().map(|c| c.q));
    let declared_extents = extent_1.is_some() || extent_2.is_some();
    Ok(ParsedMatches {
        corrs,
        extent_1: extent_1.unwrap_or(bbox_1),
        extent_2: extent_2.unwrap_or(bbox_2),
        declared_extents,
    })
}

fn parse_field(field: &str, line_no: usize) -> Result<f64> {
    field.parse::<f64>().map_err(|_| GridsacError::Parse {
        line: line_no,
        msg: format!("not a number: {field}"),
    })
}

/// Serialize matches; extents are emitted as headers when given (anchored at
/// the origin, so only widths and heights are stored). Float formatting is
/// round-trip exact.
pub fn write_matches_string(corrs: &[Correspondence], extents: Option<(&Aabb2, &Aabb2)>) -> String {
    let mut out = String::new();
    if let Some((e1, e2)) = extents {
        out.push_str(&format!("extent1 {} {}\n", e1.width(), e1.height()));
        out.push_str(&format!("extent2 {} {}\n", e2.width(), e2.height()));
    }
    for c in corrs {
        match c.score {
            Some(s) => out.push_str(&format!("{} {} {} {} {}\n", c.p.x, c.p.y, c.q.x, c.q.y, s)),
            None => out.push_str(&format!("{} {} {} {}\n", c.p.x, c.p.y, c.q.x, c.q.y)),
        }
    }
    out
}

/// Write matches to disk.
pub fn write_matches(
    path: &Path,
    corrs: &[Correspondence],
    extents: Option<(&Aabb2, &Aabb2)>,
) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(write_matches_string(corrs, extents).as_bytes())?;
    Ok(())
}
