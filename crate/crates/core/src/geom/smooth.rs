use super::measure::{min_rad, settle_window, thickness};
use super::polygon::{Polygon, Vec3};
use crate::error::{Error, Result};

/// Fine samples per polygon vertex when re-measuring the smoothed curve.
const OVERSAMPLE: usize = 4;

/// Ropelength upper bound of the C^1 curve obtained by replacing every corner
/// with a tangent circular arc.
///
/// The arc at vertex `i` has radius `min(l_prev, l_next) / (2 tan(theta / 2))`
/// and is tangent to both edges at distance `min(l_prev, l_next) / 2` from the
/// vertex, so neighbouring arcs never overlap. Its length is exact; its
/// thickness is the smaller of the least arc radius and half the self-distance
/// of a fine inscribed resampling, reduced by the chord sagitta.
pub fn smoothed_rop_bound(p: &Polygon) -> Result<f64> {
    let t = thickness(p)?;
    if !t.embedded {
        return Err(Error::NonEmbedded {
            distance: 2.0 * t.half_dcsd,
        });
    }
    let curve = ArcSmoothed::new(p);
    let length = curve.length();
    let spacing = length / (OVERSAMPLE * p.len()) as f64;
    let fine = curve.sample(spacing);
    let fine_rad = min_rad(&fine)?;
    let (_, pair) = settle_window(&fine, fine_rad.min(curve.min_radius));
    let half_distance = pair.map_or(f64::INFINITY, |c| c.distance) / 2.0;
    let max_chord = fine
        .edge_lengths()
        .into_iter()
        .fold(0.0f64, f64::max);
    let sagitta = max_chord * max_chord / (8.0 * curve.min_radius);
    let curve_thickness = curve.min_radius.min(half_distance - sagitta);
    if curve_thickness <= 0.0 {
        return Err(Error::NonEmbedded {
            distance: 2.0 * half_distance,
        });
    }
    Ok(length / curve_thickness)
}

struct Corner {
    vertex: Vec3,
    incoming: Vec3,
    outgoing: Vec3,
    tangent_length: f64,
    angle: f64,
    radius: f64,
}

struct ArcSmoothed {
    corners: Vec<Corner>,
    min_radius: f64,
}

impl ArcSmoothed {
    fn new(p: &Polygon) -> Self {
        let n = p.len();
        let lengths = p.edge_lengths();
        let mut min_radius = f64::INFINITY;
        let corners = (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let incoming = p.edge_vector(prev) / lengths[prev];
                let outgoing = p.edge_vector(i) / lengths[i];
                let angle = incoming.cross(&outgoing).norm().atan2(incoming.dot(&outgoing));
                let l = lengths[prev].min(lengths[i]);
                let radius = if angle > 1e-12 {
                    l / (2.0 * (angle / 2.0).tan())
                } else {
                    f64::INFINITY
                };
                min_radius = min_radius.min(radius);
                Corner {
                    vertex: p.vertices()[i],
                    incoming,
                    outgoing,
                    tangent_length: l / 2.0,
                    angle,
                    radius,
                }
            })
            .collect();
        ArcSmoothed {
            corners,
            min_radius,
        }
    }

    fn arc_length(c: &Corner) -> f64 {
        if c.radius.is_finite() {
            c.radius * c.angle
        } else {
            2.0 * c.tangent_length
        }
    }

    fn length(&self) -> f64 {
        let n = self.corners.len();
        (0..n)
            .map(|i| {
                let c = &self.corners[i];
                let next = &self.corners[(i + 1) % n];
                let edge = (next.vertex - c.vertex).norm();
                Self::arc_length(c) + (edge - c.tangent_length - next.tangent_length).max(0.0)
            })
            .sum()
    }

    fn sample(&self, spacing: f64) -> Polygon {
        let n = self.corners.len();
        let mut pts: Vec<Vec3> = Vec::new();
        for i in 0..n {
            let c = &self.corners[i];
            let start = c.vertex - c.incoming * c.tangent_length;
            let end = c.vertex + c.outgoing * c.tangent_length;
            let arc = Self::arc_length(c);
            let m = (arc / spacing).ceil().max(1.0) as usize;
            if c.radius.is_finite() {
                let normal = (c.outgoing - c.incoming * c.incoming.dot(&c.outgoing)).normalize();
                let centre = start + normal * c.radius;
                for k in 0..m {
                    let phi = c.angle * k as f64 / m as f64;
                    pts.push(centre + (-normal * phi.cos() + c.incoming * phi.sin()) * c.radius);
                }
            } else {
                for k in 0..m {
                    pts.push(start + (end - start) * (k as f64 / m as f64));
                }
            }
            let next = &self.corners[(i + 1) % n];
            let next_start = next.vertex - next.incoming * next.tangent_length;
            let straight = (next_start - end).norm();
            if straight > 1e-6 * spacing {
                let m = (straight / spacing).ceil().max(1.0) as usize;
                for k in 0..m {
                    pts.push(end + (next_start - end) * (k as f64 / m as f64));
                }
            }
        }
        let tiny = 1e-6 * spacing;
        pts.dedup_by(|a, b| (*a - *b).norm() < tiny);
        while pts.len() > 3 && (pts[0] - pts[pts.len() - 1]).norm() < tiny {
            pts.pop();
        }
        Polygon::from_vertices_unchecked(pts)
    }
}
