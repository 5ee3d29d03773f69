//! Plain-text polytope files.
//!
//! ```text
//! # comment
//! 4 2
//! 1 1
//! 1 -1
//! -1 1
//! -1 -1
//! ```
//!
//! The first non-comment line is `n_points dim`; each following line holds
//! one point. Blank lines and lines starting with `#` are ignored.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;

use crate::error::{ParseError, Result};
use crate::lattice::{Lattice, LatticePoint};

pub fn parse_polytope<L: Lattice>(text: &str) -> Result<Vec<LatticePoint<L>>, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| ParseError::new("missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [count, dim] = fields[..] else {
        return Err(ParseError::at(header_line, "header must be `n_points dim`"));
    };
    let parse_usize = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| ParseError::at(header_line, format!("invalid header field `{s}`")))
    };
    let (count, dim) = (parse_usize(count)?, parse_usize(dim)?);
    if dim == 0 {
        return Err(ParseError::at(header_line, "dimension must be positive"));
    }

    let mut points = Vec::with_capacity(count);
    let mut last = header_line;
    for (line, text) in lines {
        if points.len() == count {
            return Err(ParseError::at(line, format!("more than {count} points")));
        }
        let coords: Vec<BigInt> = text
            .split_whitespace()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| ParseError::at(line, format!("`{s}` is not an integer")))
            })
            .collect::<Result<_, _>>()?;
        if coords.len() != dim {
            return Err(ParseError::at(
                line,
                format!("expected {dim} coordinates, found {}", coords.len()),
            ));
        }
        points.push(LatticePoint::new(coords));
        last = line;
    }
    if points.len() != count {
        return Err(ParseError::at(
            last + 1,
            format!("expected {count} points, found {}", points.len()),
        ));
    }
    Ok(points)
}

pub fn read_polytope<L: Lattice>(path: impl AsRef<Path>) -> Result<Vec<LatticePoint<L>>, ParseError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| ParseError::new(format!("{}: {e}", path.display())))?;
    parse_polytope(&text)
}

/// Inverse of [`parse_polytope`].
pub fn format_polytope<L: Lattice>(points: &[LatticePoint<L>]) -> String {
    let dim = points.first().map_or(0, LatticePoint::dim);
    let mut out = format!("{} {}\n", points.len(), dim);
    for p in points {
        let row: Vec<String> = p.coords().iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
