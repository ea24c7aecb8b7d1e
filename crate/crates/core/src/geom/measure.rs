//! Length, curvature and thickness of closed polygons.
//!
//! Thickness follows the polygonal convention `min(minRad, dcsd / 2)`: the
//! smallest local radius at a vertex, or half the closest approach between
//! edges that are far apart along the curve. "Far apart" means the edges
//! strictly between the pair, taken the short way round, have total length at
//! least `pi * thickness_estimate`. For equal edges this is the index window
//! `ceil(pi * thickness_estimate / edge_length)`. The estimate starts at minRad
//! and is lowered until the set of excluded pairs is stable.

use std::f64::consts::PI;

use super::polygon::Polygon;
use super::segment::segment_distance;
use crate::error::{Error, Result};

/// Absolute tolerance used when comparing lengths.
pub const LENGTH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ControllingFeature {
    Kink,
    Strut,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessBreakdown {
    pub min_rad: f64,
    pub half_dcsd: f64,
    pub thickness: f64,
    pub controlling_feature: ControllingFeature,
    pub embedded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RopelengthValues {
    /// Polygonal ropelength, length over thickness.
    pub prop: f64,
    /// Upper bound from the arc-smoothed curve, when computed.
    pub rop_bound: Option<f64>,
    /// Vertices per unit ropelength.
    pub resolution: f64,
}

/// Closest approach between two edges outside the exclusion window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePair {
    pub edge_a: usize,
    pub edge_b: usize,
    pub s: f64,
    pub t: f64,
    pub distance: f64,
}

pub fn polygon_length(p: &Polygon) -> f64 {
    p.edge_lengths().iter().sum()
}

/// Angle between incoming and outgoing edge directions at every vertex.
pub fn turning_angles(p: &Polygon) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|i| {
            let a = p.edge_vector((i + n - 1) % n);
            let b = p.edge_vector(i);
            a.cross(&b).norm().atan2(a.dot(&b))
        })
        .collect()
}

/// Local radius `min(l_prev, l_next) / (2 tan(theta / 2))` at every vertex
/// (infinite where the polygon is straight).
pub fn local_radii(p: &Polygon) -> Result<Vec<f64>> {
    let n = p.len();
    let lengths = p.edge_lengths();
    turning_angles(p)
        .into_iter()
        .enumerate()
        .map(|(i, theta)| {
            if PI - theta < 1e-12 {
                return Err(Error::DegenerateGeometry(format!(
                    "polygon doubles back at vertex {i}"
                )));
            }
            let l = lengths[(i + n - 1) % n].min(lengths[i]);
            Ok(l / (2.0 * (theta / 2.0).tan()))
        })
        .collect()
}

pub fn min_rad(p: &Polygon) -> Result<f64> {
    Ok(local_radii(p)?.into_iter().fold(f64::INFINITY, f64::min))
}

/// Pairs of edges closer than `pi * thickness_estimate` along the curve.
///
/// The separation of edges `i` and `j` is the length of the shorter chain of
/// edges strictly between them, so adjacent edges are always excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionWindow {
    /// `cum[k]` is the arc length from vertex 0 to vertex `k`, for `k <= n`.
    cum: Vec<f64>,
    reach: f64,
}

impl ExclusionWindow {
    pub fn new(p: &Polygon, thickness_estimate: f64) -> Self {
        let mut cum = Vec::with_capacity(p.len() + 1);
        cum.push(0.0);
        for l in p.edge_lengths() {
            cum.push(cum[cum.len() - 1] + l);
        }
        ExclusionWindow {
            cum,
            reach: PI * thickness_estimate,
        }
    }

    /// Arc length that a pair must be separated by to count as non-local.
    pub fn reach(&self) -> f64 {
        self.reach
    }

    fn total(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    /// Length of the shorter chain of edges strictly between edges `i` and `j`.
    pub fn separation(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            return 0.0;
        }
        let forward = self.cum[j] - self.cum[i + 1];
        let backward = self.total() - self.cum[j + 1] + self.cum[i];
        forward.min(backward).max(0.0)
    }

    pub fn excludes(&self, i: usize, j: usize) -> bool {
        i == j || self.separation(i, j) < self.reach
    }

    /// Whether lowering the reach to `reach` would admit any new pair, i.e.
    /// some chain of consecutive edges has length in `[reach, self.reach)`.
    fn admits_more_at(&self, reach: f64) -> bool {
        if reach >= self.reach {
            return false;
        }
        let n = self.cum.len() - 1;
        let total = self.total();
        // arc length to vertex k on the doubled curve
        let at = |k: usize| {
            if k <= n {
                self.cum[k]
            } else {
                total + self.cum[k - n]
            }
        };
        let mut end = 0;
        for start in 0..n {
            end = end.max(start);
            while end < start + n && at(end) - at(start) < reach {
                end += 1;
            }
            if end < start + n && at(end) - at(start) < self.reach {
                return true;
            }
        }
        false
    }
}

/// Whether the closest points `x = edge_a(s)` and `y = edge_b(t)` form a
/// doubly-critical pair: moving either point along the polygon, onto the
/// neighbouring edge when it sits at a vertex, does not bring it closer to
/// the other. Interior points are critical by construction of the segment
/// distance; vertices need the check on the far-side edge.
pub(crate) fn is_doubly_critical(p: &Polygon, edge_a: usize, s: f64, edge_b: usize, t: f64) -> bool {
    let point = |e: usize, u: f64| {
        let (a, b) = p.edge(e);
        a + (b - a) * u
    };
    let x = point(edge_a, s);
    let y = point(edge_b, t);
    end_is_critical(p, edge_a, s, y) && end_is_critical(p, edge_b, t, x)
}

fn end_is_critical(p: &Polygon, edge: usize, u: f64, other: crate::geom::Vec3) -> bool {
    let n = p.len() as isize;
    let e = edge as isize;
    let (vertex, neighbour) = if u <= 0.0 {
        (p.vertex(e), p.vertex((e - 1).rem_euclid(n)))
    } else if u >= 1.0 {
        (p.vertex(e + 1), p.vertex((e + 2).rem_euclid(n)))
    } else {
        return true;
    };
    let away = neighbour - vertex;
    let to_other = other - vertex;
    to_other.dot(&away) <= 1e-12 * away.norm() * to_other.norm()
}

/// Closest doubly-critical pair of edges outside `window`.
pub fn closest_nonlocal_pair(p: &Polygon, window: &ExclusionWindow) -> Option<EdgePair> {
    let n = p.len();
    let mids: Vec<_> = (0..n)
        .map(|i| {
            let (a, b) = p.edge(i);
            ((a + b) * 0.5, (b - a).norm() * 0.5)
        })
        .collect();
    let mut best: Option<EdgePair> = None;
    let mut best_d = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let (mi, hi) = mids[i];
            let (mj, hj) = mids[j];
            if (mi - mj).norm() - hi - hj >= best_d || window.excludes(i, j) {
                continue;
            }
            let (a0, a1) = p.edge(i);
            let (b0, b1) = p.edge(j);
            let c = segment_distance(a0, a1, b0, b1);
            if c.distance < best_d && is_doubly_critical(p, i, c.s, j, c.t) {
                best_d = c.distance;
                best = Some(EdgePair {
                    edge_a: i,
                    edge_b: j,
                    s: c.s,
                    t: c.t,
                    distance: c.distance,
                });
            }
        }
    }
    best
}

/// Shrinks the thickness estimate until the exclusion window is self-consistent.
pub(crate) fn settle_window(p: &Polygon, min_rad: f64) -> (ExclusionWindow, Option<EdgePair>) {
    let mut window = ExclusionWindow::new(p, min_rad);
    loop {
        let pair = closest_nonlocal_pair(p, &window);
        let d = pair.map_or(f64::INFINITY, |c| c.distance);
        let next = PI * (d / 2.0);
        if !window.admits_more_at(next) {
            return (window, pair);
        }
        window.reach = next;
    }
}

/// Doubly-critical self-distance: the closest approach between non-local edges.
///
/// Infinite when the window leaves no candidate pairs (small convex polygons),
/// zero for self-intersecting polygons.
pub fn dcsd(p: &Polygon) -> Result<f64> {
    let mr = min_rad(p)?;
    let (_, pair) = settle_window(p, mr);
    Ok(pair.map_or(f64::INFINITY, |c| c.distance))
}

/// The exclusion window and closest non-local pair used by [`thickness`].
pub fn strut_window(p: &Polygon) -> Result<(ExclusionWindow, Option<EdgePair>)> {
    let mr = min_rad(p)?;
    Ok(settle_window(p, mr))
}

pub fn thickness(p: &Polygon) -> Result<ThicknessBreakdown> {
    let min_rad = min_rad(p)?;
    let (_, pair) = settle_window(p, min_rad);
    let d = pair.map_or(f64::INFINITY, |c| c.distance);
    let half_dcsd = d / 2.0;
    let embedded = d > LENGTH_TOL;
    let controlling_feature = if half_dcsd <= min_rad + LENGTH_TOL {
        ControllingFeature::Strut
    } else {
        ControllingFeature::Kink
    };
    Ok(ThicknessBreakdown {
        min_rad,
        half_dcsd,
        thickness: if embedded { min_rad.min(half_dcsd) } else { 0.0 },
        controlling_feature,
        embedded,
    })
}

pub fn ropelength(p: &Polygon) -> Result<RopelengthValues> {
    let t = thickness(p)?;
    if !t.embedded || t.thickness <= 0.0 {
        return Err(Error::NonEmbedded {
            distance: 2.0 * t.half_dcsd,
        });
    }
    let prop = polygon_length(p) / t.thickness;
    Ok(RopelengthValues {
        prop,
        rop_bound: None,
        resolution: p.len() as f64 / prop,
    })
}

/// Ropelength with the smoothed upper bound filled in.
pub fn ropelength_with_bound(p: &Polygon) -> Result<RopelengthValues> {
    let mut values = ropelength(p)?;
    values.rop_bound = Some(super::smooth::smoothed_rop_bound(p)?);
    Ok(values)
}

/// Rescales `p` about its centroid so that its thickness is exactly one.
pub fn normalize_thickness(p: &Polygon) -> Result<Polygon> {
    let t = thickness(p)?;
    if !t.embedded || t.thickness <= 0.0 {
        return Err(Error::NonEmbedded {
            distance: 2.0 * t.half_dcsd,
        });
    }
    Ok(p.scaled(1.0 / t.thickness))
}
