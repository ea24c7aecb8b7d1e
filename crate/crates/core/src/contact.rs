//! Strut and kink detection, and the rigidity matrix whose columns are
//! constraint gradients.
//!
//! All constraints are stated for a unit-radius tube:
//!
//! * a strut between edges `a` and `b` requires the distance between the
//!   closest points `x_a(s)` and `x_b(t)` to be at least 2;
//! * a kink at vertex `i` and adjacent edge `e` requires
//!   `l_e / (2 tan(theta_i / 2)) >= 1`, i.e. `theta_i <= 2 atan(l_e / 2)`.
//!   Both adjacent edges are checked, so the pair covers the local radius.
//!
//! Rigidity columns are constraint gradients. A strut column holds its
//! closest-point parameters fixed; a kink column is the full gradient of
//! `2 atan(l_e / 2) - theta_i`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{
    is_doubly_critical, segment_distance, strut_window, ExclusionWindow, Polygon, Vec3,
};

pub const DEFAULT_ACTIVATION_GAP: f64 = 1e-3;
pub const DEFAULT_KINK_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactOptions {
    /// Struts are active when `distance - 2 <= activation_gap`.
    pub activation_gap: f64,
    /// Kinks are active when `theta >= theta_max - kink_tolerance` (radians).
    pub kink_tolerance: f64,
}

impl Default for ContactOptions {
    fn default() -> Self {
        ContactOptions {
            activation_gap: DEFAULT_ACTIVATION_GAP,
            kink_tolerance: DEFAULT_KINK_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strut {
    pub edge_a: usize,
    pub edge_b: usize,
    pub s: f64,
    pub t: f64,
    /// Distance minus the tube diameter 2.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub vertex: usize,
    /// An adjacent edge (`vertex - 1` or `vertex`) whose length bounds the turn.
    pub edge: usize,
    /// `theta - 2 atan(l_edge / 2)`, in radians.
    pub excess: f64,
}

/// A sparse column: `(row, value)` pairs sorted by row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseColumn {
    pub entries: Vec<(usize, f64)>,
}

impl SparseColumn {
    pub fn dot_dense(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|&(r, v)| v * x[r]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt()
    }

    /// `y += alpha * self`.
    pub fn axpy(&self, alpha: f64, y: &mut [f64]) {
        for &(r, v) in &self.entries {
            y[r] += alpha * v;
        }
    }

    pub(crate) fn from_vertex_gradients(grads: &[(usize, Vec3)]) -> SparseColumn {
        let mut map: BTreeMap<usize, f64> = BTreeMap::new();
        for &(v, g) in grads {
            for k in 0..3 {
                *map.entry(3 * v + k).or_default() += g[k];
            }
        }
        SparseColumn {
            entries: map.into_iter().filter(|&(_, x)| x != 0.0).collect(),
        }
    }
}

/// Column-compressed matrix with `rows` rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RigidityMatrix {
    pub rows: usize,
    pub columns: Vec<SparseColumn>,
}

impl RigidityMatrix {
    pub fn new(rows: usize, columns: Vec<SparseColumn>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.entries.iter().all(|&(r, _)| r < rows)));
        RigidityMatrix { rows, columns }
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    /// `A x` as a dense vector.
    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        for (c, &xi) in self.columns.iter().zip(x) {
            if xi != 0.0 {
                c.axpy(xi, &mut y);
            }
        }
        y
    }

    /// `A^T y`.
    pub fn tmul(&self, y: &[f64]) -> Vec<f64> {
        self.columns.iter().map(|c| c.dot_dense(y)).collect()
    }
}

/// Detected contacts and their unit-normalized gradient columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactSet {
    pub struts: Vec<Strut>,
    pub kinks: Vec<Kink>,
    /// Struts first, then kinks, each column scaled to unit norm.
    pub rigidity: RigidityMatrix,
    /// Euclidean norms of the raw gradients before scaling.
    pub gradient_norms: Vec<f64>,
}

impl ContactSet {
    pub fn len(&self) -> usize {
        self.struts.len() + self.kinks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Contacts as CSV: `kind,a,b,s,t,value` (for kinks `a` is the vertex and `b` the bounding edge).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,a,b,s,t,value\n");
        for s in &self.struts {
            let _ = writeln!(
                out,
                "strut,{},{},{},{},{}",
                s.edge_a, s.edge_b, s.s, s.t, s.gap
            );
        }
        for k in &self.kinks {
            let _ = writeln!(out, "kink,{},{},,,{}", k.vertex, k.edge, k.excess);
        }
        out
    }
}

/// Struts with gap at most `activation_gap`, using the exclusion window of `p`'s thickness.
pub fn find_struts(p: &Polygon, activation_gap: f64) -> Result<Vec<Strut>> {
    let (window, _) = strut_window(p)?;
    Ok(find_struts_in_window(p, activation_gap, &window))
}

/// Struts for a polygon whose thickness is known to be about `thickness`.
pub fn find_struts_near_thickness(p: &Polygon, activation_gap: f64, thickness: f64) -> Vec<Strut> {
    find_struts_in_window(p, activation_gap, &ExclusionWindow::new(p, thickness))
}

/// All doubly-critical edge pairs outside `window` and distance at most `2 + activation_gap`. Contacts sharing the same closest points (vertex
/// contacts reachable from several edge pairs) are reported once.
pub fn find_struts_in_window(p: &Polygon, activation_gap: f64, window: &ExclusionWindow) -> Vec<Strut> {
    let n = p.len();
    let reach = 2.0 + activation_gap;
    let mids: Vec<_> = (0..n)
        .map(|i| {
            let (a, b) = p.edge(i);
            ((a + b) * 0.5, (b - a).norm() * 0.5)
        })
        .collect();
    let mut found: BTreeMap<(usize, i64, usize, i64), Strut> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (mi, hi) = mids[i];
            let (mj, hj) = mids[j];
            if (mi - mj).norm() - hi - hj > reach || window.excludes(i, j) {
                continue;
            }
            let (a0, a1) = p.edge(i);
            let (b0, b1) = p.edge(j);
            let c = segment_distance(a0, a1, b0, b1);
            if c.distance > reach || !is_doubly_critical(p, i, c.s, j, c.t) {
                continue;
            }
            let strut = canonical_strut(i, c.s, j, c.t, c.distance - 2.0, n);
            let key = (
                strut.edge_a,
                (strut.s * 1e6).round() as i64,
                strut.edge_b,
                (strut.t * 1e6).round() as i64,
            );
            found
                .entry(key)
                .and_modify(|e| {
                    if strut.gap < e.gap {
                        *e = strut
                    }
                })
                .or_insert(strut);
        }
    }
    let mut struts: Vec<Strut> = found.into_values().collect();
    struts.sort_by(|x, y| {
        (x.edge_a, x.edge_b)
            .cmp(&(y.edge_a, y.edge_b))
            .then(x.s.total_cmp(&y.s))
            .then(x.t.total_cmp(&y.t))
    });
    struts
}

/// Moves parameter-1 endpoints onto the following edge and orders the edges.
fn canonical_strut(a: usize, s: f64, b: usize, t: f64, gap: f64, n: usize) -> Strut {
    let (a, s) = if s >= 1.0 - 1e-12 { ((a + 1) % n, 0.0) } else { (a, s) };
    let (b, t) = if t >= 1.0 - 1e-12 { ((b + 1) % n, 0.0) } else { (b, t) };
    if a <= b {
        Strut {
            edge_a: a,
            edge_b: b,
            s,
            t,
            gap,
        }
    } else {
        Strut {
            edge_a: b,
            edge_b: a,
            s: t,
            t: s,
            gap,
        }
    }
}

/// Vertices turning within `tolerance` of the unit-radius bound.
pub fn find_kinks(p: &Polygon, tolerance: f64) -> Result<Vec<Kink>> {
    let n = p.len();
    let lengths = p.edge_lengths();
    if let Some((edge, &length)) = lengths.iter().enumerate().find(|(_, &l)| l >= 2.0) {
        return Err(Error::TooCoarse { edge, length });
    }
    let angles = crate::geom::turning_angles(p);
    let mut kinks = Vec::new();
    for (i, &theta) in angles.iter().enumerate() {
        // both adjacent edges: either can become the shorter one after a step
        for edge in [(i + n - 1) % n, i] {
            let excess = theta - 2.0 * (lengths[edge] / 2.0).atan();
            if excess >= -tolerance {
                kinks.push(Kink {
                    vertex: i,
                    edge,
                    excess,
                });
            }
        }
    }
    Ok(kinks)
}

/// Frozen-parameter distance minus 2.
pub fn strut_value(p: &Polygon, s: &Strut) -> f64 {
    let (a0, a1) = p.edge(s.edge_a);
    let (b0, b1) = p.edge(s.edge_b);
    ((a0 + (a1 - a0) * s.s) - (b0 + (b1 - b0) * s.t)).norm() - 2.0
}

/// Slack `2 atan(l_edge / 2) - theta` of the kink bound, negative when violated.
pub fn kink_value(p: &Polygon, k: &Kink) -> f64 {
    let n = p.len();
    let a = p.edge_vector((k.vertex + n - 1) % n);
    let b = p.edge_vector(k.vertex);
    let theta = a.cross(&b).norm().atan2(a.dot(&b));
    2.0 * (p.edge_vector(k.edge).norm() / 2.0).atan() - theta
}

/// Gradient of the strut distance with `s`, `t` held fixed.
pub fn strut_gradient(p: &Polygon, s: &Strut) -> Result<Vec<(usize, Vec3)>> {
    let n = p.len();
    let (a0, a1) = p.edge(s.edge_a);
    let (b0, b1) = p.edge(s.edge_b);
    let d = (a0 + (a1 - a0) * s.s) - (b0 + (b1 - b0) * s.t);
    let dist = d.norm();
    if dist <= 1e-14 {
        return Err(Error::NonEmbedded { distance: dist });
    }
    let u = d / dist;
    Ok(vec![
        (s.edge_a, u * (1.0 - s.s)),
        ((s.edge_a + 1) % n, u * s.s),
        (s.edge_b, -u * (1.0 - s.t)),
        ((s.edge_b + 1) % n, -u * s.t),
    ])
}

/// Gradient of the turning angle at `vertex` for its three vertices.
pub fn turning_angle_gradient(p: &Polygon, vertex: usize) -> Result<[(usize, Vec3); 3]> {
    let n = p.len();
    let prev = (vertex + n - 1) % n;
    let next = (vertex + 1) % n;
    let a = p.edge_vector(prev);
    let b = p.edge_vector(vertex);
    let (la, lb) = (a.norm(), b.norm());
    let (ua, ub) = (a / la, b / lb);
    let cos = ua.dot(&ub);
    let sin = ua.cross(&ub).norm();
    if sin <= 1e-14 {
        return Err(Error::DegenerateGeometry(format!(
            "turning angle at vertex {vertex} is not differentiable"
        )));
    }
    let da = (ua * cos - ub) / (la * sin);
    let db = (ub * cos - ua) / (lb * sin);
    Ok([(prev, -da), (vertex, da - db), (next, db)])
}

/// Gradient of [`kink_value`]: `-grad theta` plus the edge-length term of the bound.
pub fn kink_gradient(p: &Polygon, k: &Kink) -> Result<Vec<(usize, Vec3)>> {
    let n = p.len();
    let mut grads: Vec<(usize, Vec3)> = turning_angle_gradient(p, k.vertex)?
        .into_iter()
        .map(|(v, g)| (v, -g))
        .collect();
    let e = p.edge_vector(k.edge);
    let l = e.norm();
    let u = e / l * (1.0 / (1.0 + l * l / 4.0));
    grads.push((k.edge, -u));
    grads.push(((k.edge + 1) % n, u));
    Ok(grads)
}

/// Assembles the unit-normalized rigidity matrix for the given contacts.
pub fn build_rigidity_matrix(p: &Polygon, struts: Vec<Strut>, kinks: Vec<Kink>) -> Result<ContactSet> {
    let mut columns = Vec::with_capacity(struts.len() + kinks.len());
    let mut gradient_norms = Vec::with_capacity(columns.capacity());
    let mut push = |grads: Vec<(usize, Vec3)>| {
        let mut col = SparseColumn::from_vertex_gradients(&grads);
        let norm = col.norm();
        for e in &mut col.entries {
            e.1 /= norm;
        }
        columns.push(col);
        gradient_norms.push(norm);
    };
    for s in &struts {
        push(strut_gradient(p, s)?);
    }
    for k in &kinks {
        push(kink_gradient(p, k)?);
    }
    Ok(ContactSet {
        struts,
        kinks,
        rigidity: RigidityMatrix::new(3 * p.len(), columns),
        gradient_norms,
    })
}

/// Detects struts (for a polygon at about unit thickness) and kinks, and builds the matrix.
pub fn detect_contacts(p: &Polygon, opts: &ContactOptions) -> Result<ContactSet> {
    let struts = find_struts_near_thickness(p, opts.activation_gap, 1.0);
    let kinks = find_kinks(p, opts.kink_tolerance)?;
    build_rigidity_matrix(p, struts, kinks)
}

/// Gradient of total length, flattened `[x0, y0, z0, ...]`.
pub fn length_gradient(p: &Polygon) -> Vec<f64> {
    let n = p.len();
    let units: Vec<Vec3> = (0..n).map(|i| p.edge_vector(i).normalize()).collect();
    let mut g = vec![0.0; 3 * n];
    for i in 0..n {
        // edge i-1 ends at v_i, edge i starts at v_i
        let gi = units[(i + n - 1) % n] - units[i];
        g[3 * i..3 * i + 3].copy_from_slice(gi.as_slice());
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starts::regular_polygon;

    #[test]
    fn parallel_runs_give_one_strut_per_pair() {
        // long rectangle 2 apart, caps far away
        let mut v = Vec::new();
        for k in 0..40 {
            v.push(Vec3::new(k as f64 * 0.25, 0.0, 0.0));
        }
        for k in 0..40 {
            v.push(Vec3::new(10.0 - k as f64 * 0.25, 2.0, 0.0));
        }
        let p = Polygon::new(v).unwrap();
        let struts = find_struts_in_window(&p, 1e-3, &ExclusionWindow::new(&p, 1.0));
        assert!(!struts.is_empty());
        for s in &struts {
            assert!(s.gap.abs() < 1e-12);
        }
        let mut keys: Vec<_> = struts.iter().map(|s| (s.edge_a, s.edge_b)).collect();
        keys.dedup();
        assert_eq!(keys.len(), struts.len());
    }

    #[test]
    fn square_kinks() {
        let sq = Polygon::from_coords([
            [0.0, 0.0, 0.0],
            [0.25, 0.0, 0.0],
            [0.25, 0.25, 0.0],
            [0.0, 0.25, 0.0],
        ])
        .unwrap();
        let kinks = find_kinks(&sq, 1e-4).unwrap();
        let pairs: Vec<_> = kinks.iter().map(|k| (k.vertex, k.edge)).collect();
        assert_eq!(pairs, vec![(0, 3), (0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]);
    }

    #[test]
    fn coarse_edges_are_rejected() {
        let p = regular_polygon(4, 2.0);
        assert!(matches!(find_kinks(&p, 1e-4), Err(Error::TooCoarse { .. })));
    }

    #[test]
    fn length_gradient_of_regular_polygon_is_radial() {
        let n = 12;
        let p = regular_polygon(n, 3.0);
        let g = length_gradient(&p);
        let expected = 2.0 * (std::f64::consts::PI / n as f64).sin();
        for (i, v) in p.vertices().iter().enumerate() {
            let gi = Vec3::new(g[3 * i], g[3 * i + 1], g[3 * i + 2]);
            assert!((gi.norm() - expected).abs() < 1e-12);
            assert!((gi.normalize().dot(&v.normalize()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn strut_column_weights() {
        let p = Polygon::from_coords([
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 0.0, 5.0],
            [1.0, 2.0, 5.0],
            [1.0, 2.0, 0.0],
            [0.0, 2.0, 0.0],
            [0.0, 2.0, 5.0],
            [0.0, 0.0, 5.0],
        ])
        .unwrap();
        let strut = Strut {
            edge_a: 0,
            edge_b: 4,
            s: 0.5,
            t: 0.5,
            gap: 0.0,
        };
        let set = build_rigidity_matrix(&p, vec![strut], vec![]).unwrap();
        let col = &set.rigidity.columns[0];
        assert!((col.norm() - 1.0).abs() < 1e-15);
        assert_eq!(col.entries.len(), 4);
        for &(r, v) in &col.entries {
            assert_eq!(r % 3, 1);
            assert!((v.abs() - 0.5).abs() < 1e-15);
        }
    }
}
