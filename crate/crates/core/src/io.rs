//! The `TIGHTKNOT 1` polyline text format.
//!
//! ```text
//! # optional comments
//! TIGHTKNOT 1
//! 3
//! 0 0 0
//! 1 0 0
//! 0 1 0
//! ```
//!
//! Coordinates are written in shortest round-trip form, so a write followed
//! by a read reproduces every vertex bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{Polygon, Vec3};

pub const HEADER: &str = "TIGHTKNOT 1";

pub fn format_polygon(p: &Polygon) -> String {
    let mut out = String::with_capacity(24 * (p.len() + 2));
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "{}", p.len());
    for v in p.vertices() {
        let _ = writeln!(out, "{} {} {}", v.x, v.y, v.z);
    }
    out
}

pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l));

    let header = lines.find(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    });
    let Some((hline, h)) = header else {
        return Err(err(1, format!("missing `{HEADER}` header")));
    };
    if h.trim() != HEADER {
        return Err(err(hline, format!("expected `{HEADER}`, found `{}`", h.trim())));
    }

    let (cline, c) = lines
        .next()
        .ok_or_else(|| err(hline + 1, "missing vertex count".into()))?;
    let n: usize = c
        .trim()
        .parse()
        .map_err(|_| err(cline, format!("invalid vertex count `{}`", c.trim())))?;

    let mut vertices = Vec::with_capacity(n);
    let mut last = cline;
    for (lno, l) in lines.by_ref() {
        last = lno;
        if vertices.len() == n {
            if l.trim().is_empty() {
                continue;
            }
            return Err(err(
                lno,
                format!("vertex count mismatch: header says {n}, found more lines"),
            ));
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(
                lno,
                format!("expected three coordinates, found {}", fields.len()),
            ));
        }
        let mut xyz = [0.0; 3];
        for (slot, f) in xyz.iter_mut().zip(&fields) {
            let x: f64 = f
                .parse()
                .map_err(|_| err(lno, format!("invalid coordinate `{f}`")))?;
            if !x.is_finite() {
                return Err(err(lno, format!("non-finite coordinate `{f}`")));
            }
            *slot = x;
        }
        vertices.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
    }
    if vertices.len() != n {
        // a trailing newline yields one empty final line; point past the data
        return Err(err(
            last,
            format!(
                "vertex count mismatch: header says {n}, found {}",
                vertices.len()
            ),
        ));
    }
    Polygon::new(vertices).map_err(|e| err(cline, e.to_string()))
}

pub fn read_polygon(path: impl AsRef<Path>) -> Result<Polygon> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_polygon(&text)
}

pub fn write_polygon(path: impl AsRef<Path>, p: &Polygon) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_polygon(p)).map_err(|e| Error::io(path, e))
}
