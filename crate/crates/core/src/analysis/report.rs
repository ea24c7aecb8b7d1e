use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::library::{parse_summands, KnotLibrary};
use super::writhe::writhe;
use crate::error::{Error, Result};
use crate::geom::ropelength;
use crate::tighten::with_thread_cap;

/// Rope saved by each connect sum under the connect-sum conjecture.
pub const ROPE_SAVED_PER_SUM: f64 = 4.0 * PI - 4.0;
/// Rows differing by more than this percentage are anomalies...
pub const ANOMALY_PCT: f64 = 4.0;
/// ...provided the composite writhe is at least this large.
pub const ANOMALY_MIN_WRITHE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct WritheReportRow {
    pub label: String,
    pub wr_composite: f64,
    pub wr_sum: f64,
    /// `|wr_composite - wr_sum| / |wr_composite|`, in percent.
    pub pct_diff: f64,
    pub starts_tried: usize,
    pub anomaly: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectSumRow {
    pub label: String,
    /// Ropelength of the composite.
    pub x: f64,
    /// Sum of the summands' ropelengths.
    pub y: f64,
    pub n_summands: usize,
    /// `y - x - (n_summands - 1)(4 pi - 4)`; negative values contradict the conjecture.
    pub slack: f64,
}

impl ConnectSumRow {
    pub fn new(label: impl Into<String>, x: f64, y: f64, n_summands: usize) -> Self {
        let slack = y - x - (n_summands.saturating_sub(1)) as f64 * ROPE_SAVED_PER_SUM;
        ConnectSumRow {
            label: label.into(),
            x,
            y,
            n_summands,
            slack,
        }
    }

    pub fn violates(&self) -> bool {
        self.slack < 0.0
    }
}

pub fn percent_difference(composite: f64, sum: f64) -> f64 {
    if composite == 0.0 {
        if sum == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (composite - sum).abs() / composite.abs()
    }
}

fn prime_values<F>(lib: &KnotLibrary, f: F) -> Result<BTreeMap<String, f64>>
where
    F: Fn(&crate::geom::Polygon) -> Result<f64> + Sync,
{
    let names: Vec<&String> = lib.primes.keys().collect();
    let values: Vec<Result<f64>> =
        with_thread_cap(|| names.par_iter().map(|n| f(&lib.primes[*n])).collect());
    names
        .into_iter()
        .zip(values)
        .map(|(n, v)| Ok((n.clone(), v?)))
        .collect()
}

/// Compares each composite's writhe with the sum over its summands.
pub fn writhe_additivity_report(lib: &KnotLibrary) -> Result<Vec<WritheReportRow>> {
    let prime_wr = prime_values(lib, writhe)?;
    let composite_wr: Vec<Result<f64>> = with_thread_cap(|| {
        lib.composites
            .par_iter()
            .map(|c| writhe(&c.polygon))
            .collect()
    });
    lib.composites
        .iter()
        .zip(composite_wr)
        .map(|(c, wc)| {
            let wc = wc?;
            let mut ws = 0.0;
            for (name, variant) in parse_summands(&c.label)? {
                let w = prime_wr
                    .get(&name)
                    .ok_or_else(|| Error::MissingConformation(name.clone()))?;
                ws += if variant.bits().0 { -w } else { *w };
            }
            let pct_diff = percent_difference(wc, ws);
            Ok(WritheReportRow {
                label: c.label.clone(),
                wr_composite: wc,
                wr_sum: ws,
                pct_diff,
                starts_tried: c.starts,
                anomaly: pct_diff > ANOMALY_PCT && wc.abs() >= ANOMALY_MIN_WRITHE,
            })
        })
        .collect()
}

/// Rope saved by each composite relative to its summands.
pub fn connect_sum_report(lib: &KnotLibrary) -> Result<Vec<ConnectSumRow>> {
    let prime_prop = prime_values(lib, |p| Ok(ropelength(p)?.prop))?;
    let composite_prop: Vec<Result<f64>> = with_thread_cap(|| {
        lib.composites
            .par_iter()
            .map(|c| Ok(ropelength(&c.polygon)?.prop))
            .collect()
    });
    lib.composites
        .iter()
        .zip(composite_prop)
        .map(|(c, x)| {
            let summands = parse_summands(&c.label)?;
            let mut y = 0.0;
            for (name, _) in &summands {
                y += prime_prop
                    .get(name)
                    .ok_or_else(|| Error::MissingConformation(name.clone()))?;
            }
            Ok(ConnectSumRow::new(c.label.clone(), x?, y, summands.len()))
        })
        .collect()
}

pub fn writhe_report_csv(rows: &[WritheReportRow]) -> String {
    let mut out = String::from("label,wr_composite,wr_sum,pct_diff,starts\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.4},{}",
            r.label, r.wr_composite, r.wr_sum, r.pct_diff, r.starts_tried
        );
    }
    out
}

pub fn connect_sum_csv(rows: &[ConnectSumRow]) -> String {
    let mut out = String::from("label,x,y,n_summands,slack\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{},{:.6}",
            r.label, r.x, r.y, r.n_summands, r.slack
        );
    }
    out
}
