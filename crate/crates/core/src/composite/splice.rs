//! Connect sums of polygons.
//!
//! Both summands are scaled to unit thickness. An arc of each summand around
//! the chosen hull edge is cut out, the second summand is turned to face the
//! first across the cut and pushed away until the two bodies are well
//! separated, and the loose ends are joined by two smooth U-shaped strands.

use nalgebra::{Matrix3, Rotation3};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::hull::hull_membership;
use crate::geom::{normalize_thickness, polygon_length, segment_distance, thickness, Polygon, Vec3};
use crate::tighten::{resample_equilateral, with_thread_cap};

/// Thickness of ensemble members, leaving the tightener room to work.
pub const ENSEMBLE_THICKNESS: f64 = 1.2;

/// Splices thinner than this (summands have thickness 1) are rejected.
pub const MIN_SPLICE_THICKNESS: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpliceOptions {
    /// Chord length of the arc removed from each summand (unit thickness).
    pub opening: f64,
    /// Required body clearance beyond the tube diameter 2.
    pub gap: f64,
    pub offset_step: f64,
    pub max_offset_steps: usize,
}

impl Default for SpliceOptions {
    fn default() -> Self {
        SpliceOptions {
            opening: 4.5,
            gap: 0.5,
            offset_step: 0.1,
            max_offset_steps: 100,
        }
    }
}

/// Maximal runs of consecutive edges whose endpoints both lie on the convex hull.
///
/// A polygon lying entirely on its hull boundary (a planar convex polygon,
/// say) is one run of all edges, starting at edge 0.
pub fn hull_arcs(p: &Polygon) -> Vec<Vec<usize>> {
    let n = p.len();
    let tol = 1e-7 * p.bounding_box_diagonal();
    let on = hull_membership(p.vertices(), tol);
    let edge_on: Vec<bool> = (0..n).map(|i| on[i] && on[(i + 1) % n]).collect();
    if edge_on.iter().all(|&b| b) {
        return vec![(0..n).collect()];
    }
    // start scanning just after an off-hull edge so no run wraps
    let first_off = edge_on.iter().position(|&b| !b).expect("some edge is off the hull");
    let mut runs = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for k in 1..=n {
        let i = (first_off + k) % n;
        if edge_on[i] {
            current.push(i);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    runs
}

/// One pass is `v <- (v_prev + 2 v + v_next) / 4` at every vertex.
pub fn smooth(p: &Polygon, passes: usize) -> Polygon {
    let mut v = p.vertices().to_vec();
    let n = v.len();
    for _ in 0..passes {
        v = (0..n)
            .map(|i| (v[(i + n - 1) % n] + v[i] * 2.0 + v[(i + 1) % n]) * 0.25)
            .collect();
    }
    Polygon::from_vertices_unchecked(v)
}

struct Opening {
    /// Last kept vertex before the cut.
    a: usize,
    /// First kept vertex after the cut.
    b: usize,
    mid: Vec3,
    tangent: Vec3,
    normal: Vec3,
}

fn open_at(p: &Polygon, edge: usize, chord: f64) -> Result<Opening> {
    let n = p.len();
    if edge >= n {
        return Err(Error::InvalidInput(format!(
            "edge {edge} out of range for {n} edges"
        )));
    }
    let (s, e) = p.edge(edge);
    let mid = (s + e) * 0.5;
    let tangent = (e - s).normalize();
    let out = mid - p.centroid();
    let normal = (out - tangent * out.dot(&tangent))
        .try_normalize(1e-12)
        .ok_or_else(|| Error::SpliceFailed(format!("edge {edge} points at the centroid")))?;
    let v = p.vertices();
    let mut a = edge;
    let mut b = (edge + 1) % n;
    // at most a quarter of the polygon on each side of the edge
    let limit = n / 4;
    let mut removed = (0, 0);
    while (v[a] - mid).norm() < chord / 2.0 && removed.0 < limit {
        a = (a + n - 1) % n;
        removed.0 += 1;
    }
    while (v[b] - mid).norm() < chord / 2.0 && removed.1 < limit {
        b = (b + 1) % n;
        removed.1 += 1;
    }
    Ok(Opening {
        a,
        b,
        mid,
        tangent,
        normal,
    })
}

/// Vertices from `from` to `to` inclusive, walking forward.
fn cyclic_run(v: &[Vec3], from: usize, to: usize) -> Vec<Vec3> {
    let n = v.len();
    let len = (to + n - from) % n + 1;
    (0..len).map(|k| v[(from + k) % n]).collect()
}

fn min_distance(x: &[Vec3], y: &[Vec3], stop_below: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..x.len() - 1 {
        let (a0, a1) = (x[i], x[i + 1]);
        let (ca, ra) = ((a0 + a1) * 0.5, (a1 - a0).norm() * 0.5);
        for j in 0..y.len() - 1 {
            let (b0, b1) = (y[j], y[j + 1]);
            let (cb, rb) = ((b0 + b1) * 0.5, (b1 - b0).norm() * 0.5);
            if (ca - cb).norm() - ra - rb >= best {
                continue;
            }
            best = best.min(segment_distance(a0, a1, b0, b1).distance);
            if best < stop_below {
                return best;
            }
        }
    }
    best
}

/// Interior points of a cubic Bezier from `p0` (leaving along `t0`) to `p3`
/// (arriving along `t3`), spaced about `spacing` apart.
fn junction(p0: Vec3, t0: Vec3, p3: Vec3, t3: Vec3, reach: f64, spacing: f64) -> Vec<Vec3> {
    let p1 = p0 + t0 * reach;
    let p2 = p3 - t3 * reach;
    let rough = (p1 - p0).norm() + (p2 - p1).norm() + (p3 - p2).norm();
    let m = ((rough / spacing).ceil() as usize).max(2);
    (1..m)
        .map(|k| {
            let u = k as f64 / m as f64;
            let w = 1.0 - u;
            p0 * (w * w * w) + p1 * (3.0 * w * w * u) + p2 * (3.0 * w * u * u) + p3 * (u * u * u)
        })
        .collect()
}

/// Connect sum of `p1` and `p2` joined at edges `e1` and `e2`, which should
/// lie on the summands' hull arcs. The result has `|p1| + |p2|` vertices,
/// nearly equally spaced, and the orientations of both summands.
pub fn splice(p1: &Polygon, e1: usize, p2: &Polygon, e2: usize) -> Result<Polygon> {
    splice_with(p1, e1, p2, e2, &SpliceOptions::default())
}

pub fn splice_with(
    p1: &Polygon,
    e1: usize,
    p2: &Polygon,
    e2: usize,
    opts: &SpliceOptions,
) -> Result<Polygon> {
    let q1 = normalize_thickness(p1)?;
    let q2 = normalize_thickness(p2)?;
    let o1 = open_at(&q1, e1, opts.opening)?;
    let o2 = open_at(&q2, e2, opts.opening)?;

    // turn q2 so its edge runs against e1 and its outside faces q1
    let f1 = Matrix3::from_columns(&[-o1.tangent, -o1.normal, o1.tangent.cross(&o1.normal)]);
    let t2 = o2.tangent;
    let n2 = o2.normal;
    let f2 = Matrix3::from_columns(&[t2, n2, t2.cross(&n2)]);
    let rot = Rotation3::from_matrix(&(f1 * f2.transpose()));

    let body1 = cyclic_run(q1.vertices(), o1.b, o1.a);
    let body2_local: Vec<Vec3> = cyclic_run(q2.vertices(), o2.b, o2.a)
        .into_iter()
        .map(|v| rot * (v - o2.mid))
        .collect();
    let clearance = 2.0 + opts.gap;
    let mut placed = None;
    for k in 0..=opts.max_offset_steps {
        let offset = clearance + opts.offset_step * k as f64;
        let shift = o1.mid + o1.normal * offset;
        let body2: Vec<Vec3> = body2_local.iter().map(|&v| v + shift).collect();
        if min_distance(&body1, &body2, clearance) >= clearance {
            placed = Some(body2);
            break;
        }
    }
    let body2 = placed.ok_or_else(|| {
        Error::SpliceFailed(format!(
            "no clearance of {clearance} within {} offset steps",
            opts.max_offset_steps
        ))
    })?;

    let spacing = 0.5 * (polygon_length(&q1) / q1.len() as f64 + polygon_length(&q2) / q2.len() as f64);
    let dir = |x: Vec3, y: Vec3| (y - x).normalize();
    let (a_prev, a) = (body1[body1.len() - 2], body1[body1.len() - 1]);
    let (b, b_next) = (body1[0], body1[1]);
    let (d, d_next) = (body2[0], body2[1]);
    let (c_prev, c) = (body2[body2.len() - 2], body2[body2.len() - 1]);
    let reach1 = 0.55 * (d - a).norm();
    let reach2 = 0.55 * (b - c).norm();

    let mut vertices = body1.clone();
    vertices.extend(junction(a, dir(a_prev, a), d, dir(d, d_next), reach1, spacing));
    vertices.extend(body2.iter().copied());
    vertices.extend(junction(c, dir(c_prev, c), b, dir(b, b_next), reach2, spacing));
    let joined = Polygon::new(vertices)?;
    let result = resample_equilateral(&joined, p1.len() + p2.len())?;
    let t = thickness(&result)?;
    if !t.embedded || t.thickness < MIN_SPLICE_THICKNESS {
        return Err(Error::SpliceFailed(format!(
            "junctions pass too close to the bodies (thickness {:.3e})",
            t.thickness
        )));
    }
    Ok(result)
}

/// Splices the middle edges of every pair of hull arcs, smooths, resamples
/// and scales each result to thickness [`ENSEMBLE_THICKNESS`].
///
/// Arc pairs are visited round-robin, `(i, (i + r) mod arcs2)` for rounds
/// `r = 0, 1, ...`, so truncation to `max_candidates` spreads the choices
/// over all arcs of the first summand.
pub fn generate_start_ensemble(p1: &Polygon, p2: &Polygon, max_candidates: usize) -> Result<Vec<Polygon>> {
    let arcs1 = hull_arcs(&normalize_thickness(p1)?);
    let arcs2 = hull_arcs(&normalize_thickness(p2)?);
    let mut pairs = Vec::with_capacity(arcs1.len() * arcs2.len());
    for r in 0..arcs2.len() {
        for (i, a1) in arcs1.iter().enumerate() {
            let a2 = &arcs2[(i + r) % arcs2.len()];
            pairs.push((a1[a1.len() / 2], a2[a2.len() / 2]));
        }
    }
    let n = p1.len() + p2.len();
    let built: Vec<Option<Polygon>> = with_thread_cap(|| {
        pairs
            .par_iter()
            .map(|&(e1, e2)| {
                let s = splice(p1, e1, p2, e2).ok()?;
                let s = resample_equilateral(&smooth(&s, 3), n).ok()?;
                let t = thickness(&s).ok()?;
                if !t.embedded || t.thickness <= 0.0 {
                    return None;
                }
                Some(s.scaled(ENSEMBLE_THICKNESS / t.thickness))
            })
            .collect()
    });
    let ensemble: Vec<Polygon> = built.into_iter().flatten().take(max_candidates).collect();
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    Ok(ensemble)
}
