use std::collections::BTreeMap;
use std::path::Path;

use crate::composite::Variant;
use crate::error::{Error, Result};
use crate::geom::Polygon;
use crate::io::parse_polygon;

/// A tight composite conformation with the number of start positions tried.
#[derive(Debug, Clone)]
pub struct CompositeEntry {
    pub label: String,
    pub polygon: Polygon,
    pub starts: usize,
}

/// Tight conformations on disk:
///
/// ```text
/// DIR/primes/3_1.txt          base variant of each prime
/// DIR/composites/3_1#3_1.txt  one file per composite, named by label
/// ```
///
/// A composite file may carry a `# starts N` comment before its header.
#[derive(Debug, Clone, Default)]
pub struct KnotLibrary {
    pub primes: BTreeMap<String, Polygon>,
    pub composites: Vec<CompositeEntry>,
}

fn polyline_files(dir: &Path) -> Result<Vec<(String, std::path::PathBuf)>> {
    let mut out = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            out.push((stem.to_string(), path.clone()));
        }
    }
    out.sort();
    Ok(out)
}

fn starts_comment(text: &str) -> Option<usize> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("starts")?.trim().parse().ok())
}

impl KnotLibrary {
    pub fn load(dir: impl AsRef<Path>) -> Result<KnotLibrary> {
        let dir = dir.as_ref();
        let mut lib = KnotLibrary::default();
        let primes = dir.join("primes");
        if primes.is_dir() {
            for (name, path) in polyline_files(&primes)? {
                lib.primes.insert(name, crate::io::read_polygon(path)?);
            }
        }
        let composites = dir.join("composites");
        if composites.is_dir() {
            for (label, path) in polyline_files(&composites)? {
                let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                let polygon = parse_polygon(&text)?;
                lib.composites.push(CompositeEntry {
                    starts: starts_comment(&text).unwrap_or(1),
                    label,
                    polygon,
                });
            }
        }
        Ok(lib)
    }

    /// Conformation of one summand, e.g. `3_1m`, derived from the prime's base file.
    pub fn summand_polygon(&self, name: &str, variant: Variant) -> Result<Polygon> {
        let base = self
            .primes
            .get(name)
            .ok_or_else(|| Error::MissingConformation(name.to_string()))?;
        let (m, r) = variant.bits();
        let p = if m { base.mirrored() } else { base.clone() };
        Ok(if r { p.reversed() } else { p })
    }
}

/// Splits `3_1#5_2m` into `[("3_1", Base), ("5_2", M)]` without consulting a prime table.
pub fn parse_summands(label: &str) -> Result<Vec<(String, Variant)>> {
    label
        .split('#')
        .map(|part| {
            let part = part.trim();
            let (name, v) = if let Some(n) = part.strip_suffix("rm") {
                (n, Variant::Rm)
            } else if let Some(n) = part.strip_suffix('m') {
                (n, Variant::M)
            } else if let Some(n) = part.strip_suffix('r') {
                (n, Variant::R)
            } else {
                (part, Variant::Base)
            };
            let valid = name
                .split_once('_')
                .is_some_and(|(c, i)| c.parse::<u32>().is_ok() && i.parse::<u32>().is_ok());
            if !valid {
                return Err(Error::InvalidInput(format!("malformed summand `{part}` in `{label}`")));
            }
            Ok((name.to_string(), v))
        })
        .collect()
}
