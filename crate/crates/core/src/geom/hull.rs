//! Convex hull membership for point clouds in R^3.

use std::collections::HashMap;

use super::polygon::Vec3;

struct Face {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
    alive: bool,
}

/// Supporting planes `(normal, offset)` of the hull, or `None` when the
/// points are (numerically) coplanar.
fn hull_planes(points: &[Vec3], eps: f64) -> Option<Vec<(Vec3, f64)>> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let i0 = (0..n)
        .min_by(|&a, &b| points[a].x.total_cmp(&points[b].x))
        .unwrap();
    let i1 = (0..n)
        .max_by(|&a, &b| {
            (points[a] - points[i0])
                .norm()
                .total_cmp(&(points[b] - points[i0]).norm())
        })
        .unwrap();
    let dir = (points[i1] - points[i0]).normalize();
    let line_dist = |k: usize| {
        let d = points[k] - points[i0];
        (d - dir * d.dot(&dir)).norm()
    };
    let i2 = (0..n)
        .max_by(|&a, &b| line_dist(a).total_cmp(&line_dist(b)))
        .unwrap();
    if line_dist(i2) < eps {
        return None;
    }
    let plane_n = (points[i1] - points[i0])
        .cross(&(points[i2] - points[i0]))
        .normalize();
    let plane_dist = |k: usize| (points[k] - points[i0]).dot(&plane_n).abs();
    let i3 = (0..n)
        .max_by(|&a, &b| plane_dist(a).total_cmp(&plane_dist(b)))
        .unwrap();
    if plane_dist(i3) < eps {
        return None;
    }

    let interior = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();

    let make = |a: usize, b: usize, c: usize| -> Face {
        let normal = (points[b] - points[a])
            .cross(&(points[c] - points[a]))
            .normalize();
        Face {
            v: [a, b, c],
            normal,
            offset: normal.dot(&points[a]),
            alive: true,
        }
    };
    fn register(edges: &mut HashMap<(usize, usize), usize>, f: &Face, id: usize) {
        let [a, b, c] = f.v;
        edges.insert((a, b), id);
        edges.insert((b, c), id);
        edges.insert((c, a), id);
    }

    for (a, b, c) in [(i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)] {
        let mut f = make(a, b, c);
        if f.normal.dot(&interior) - f.offset > 0.0 {
            f = make(a, c, b);
        }
        let id = faces.len();
        register(&mut edges, &f, id);
        faces.push(f);
    }

    for k in 0..n {
        if [i0, i1, i2, i3].contains(&k) {
            continue;
        }
        let p = points[k];
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| faces[f].alive && faces[f].normal.dot(&p) - faces[f].offset > eps)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut is_visible = vec![false; faces.len()];
        for &f in &visible {
            is_visible[f] = true;
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            let [a, b, c] = faces[f].v;
            for (x, y) in [(a, b), (b, c), (c, a)] {
                match edges.get(&(y, x)) {
                    Some(&g) if is_visible[g] => {}
                    _ => horizon.push((x, y)),
                }
            }
        }
        for &f in &visible {
            faces[f].alive = false;
            let [a, b, c] = faces[f].v;
            for e in [(a, b), (b, c), (c, a)] {
                if edges.get(&e) == Some(&f) {
                    edges.remove(&e);
                }
            }
        }
        for (x, y) in horizon {
            let f = make(x, y, k);
            let id = faces.len();
            register(&mut edges, &f, id);
            faces.push(f);
        }
    }
    Some(
        faces
            .into_iter()
            .filter(|f| f.alive && f.normal.iter().all(|c| c.is_finite()))
            .map(|f| (f.normal, f.offset))
            .collect(),
    )
}

fn cross2(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Distances to the boundary of the planar convex hull, for coplanar input.
fn planar_boundary_distances(points: &[Vec3]) -> Vec<f64> {
    let origin = points[0];
    let far = points
        .iter()
        .max_by(|a, b| (*a - origin).norm().total_cmp(&(*b - origin).norm()))
        .copied()
        .unwrap();
    let u = (far - origin).normalize();
    if !u.iter().all(|c| c.is_finite()) {
        return vec![0.0; points.len()];
    }
    let normal = points
        .iter()
        .map(|p| u.cross(&(p - origin)))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    if normal.norm() < 1e-300 {
        // collinear: every point is on the boundary of a degenerate hull
        return vec![0.0; points.len()];
    }
    let v = normal.normalize().cross(&u);
    let flat: Vec<(f64, f64)> = points
        .iter()
        .map(|p| ((p - origin).dot(&u), (p - origin).dot(&v)))
        .collect();
    let mut order: Vec<usize> = (0..flat.len()).collect();
    order.sort_by(|&a, &b| {
        flat[a]
            .0
            .total_cmp(&flat[b].0)
            .then(flat[a].1.total_cmp(&flat[b].1))
    });
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(order.iter())
        } else {
            Box::new(order.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && cross2(flat[hull[hull.len() - 2]], flat[hull[hull.len() - 1]], flat[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    let m = hull.len();
    flat.iter()
        .map(|&q| {
            (0..m)
                .map(|k| {
                    let a = flat[hull[k]];
                    let b = flat[hull[(k + 1) % m]];
                    let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
                    (cross2(a, b, q) / len).max(0.0)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Distance from every point to the boundary of the convex hull of all points.
pub fn hull_boundary_distances(points: &[Vec3]) -> Vec<f64> {
    let scale = points
        .iter()
        .map(|p| p.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let eps = 1e-12 * scale;
    match hull_planes(points, eps) {
        Some(planes) => points
            .iter()
            .map(|q| {
                planes
                    .iter()
                    .map(|(n, d)| d - n.dot(q))
                    .fold(f64::INFINITY, f64::min)
                    .max(0.0)
            })
            .collect(),
        None => planar_boundary_distances(points),
    }
}

/// Points lying within `tol` of the convex hull boundary.
pub fn hull_membership(points: &[Vec3], tol: f64) -> Vec<bool> {
    hull_boundary_distances(points)
        .into_iter()
        .map(|d| d <= tol)
        .collect()
}
