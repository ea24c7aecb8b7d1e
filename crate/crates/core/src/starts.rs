//! Parametrized start configurations and simple test curves.

use std::f64::consts::PI;

use crate::geom::{Polygon, Vec3};

fn sample(n: usize, f: impl Fn(f64) -> Vec3) -> Polygon {
    let vertices = (0..n)
        .map(|k| f(2.0 * PI * k as f64 / n as f64))
        .collect();
    Polygon::new(vertices).expect("parametrized curve is a valid polygon")
}

/// Regular planar n-gon with circumradius `radius`, centred at the origin.
pub fn regular_polygon(n: usize, radius: f64) -> Polygon {
    sample(n, |t| Vec3::new(radius * t.cos(), radius * t.sin(), 0.0))
}

/// Planar ellipse with semi-axes `a` (x) and `b` (y).
pub fn ellipse(n: usize, a: f64, b: f64) -> Polygon {
    sample(n, |t| Vec3::new(a * t.cos(), b * t.sin(), 0.0))
}

/// Planar stadium: two straight runs of length `flat_length` at `y = +-radius`
/// joined by semicircular caps of radius `radius`.
pub fn stadium(flat_length: f64, radius: f64, flat_edges: usize, cap_edges: usize) -> Polygon {
    let half = flat_length / 2.0;
    let mut v = Vec::with_capacity(2 * (flat_edges + cap_edges));
    for k in 0..flat_edges {
        let x = -half + flat_length * k as f64 / flat_edges as f64;
        v.push(Vec3::new(x, -radius, 0.0));
    }
    for k in 0..cap_edges {
        let a = -PI / 2.0 + PI * k as f64 / cap_edges as f64;
        if k == 0 {
            v.push(Vec3::new(half, -radius, 0.0));
        } else {
            v.push(Vec3::new(half + radius * a.cos(), radius * a.sin(), 0.0));
        }
    }
    for k in 0..flat_edges {
        let x = half - flat_length * k as f64 / flat_edges as f64;
        v.push(Vec3::new(x, radius, 0.0));
    }
    for k in 0..cap_edges {
        let a = PI / 2.0 + PI * k as f64 / cap_edges as f64;
        if k == 0 {
            v.push(Vec3::new(-half, radius, 0.0));
        } else {
            v.push(Vec3::new(-half + radius * a.cos(), radius * a.sin(), 0.0));
        }
    }
    Polygon::new(v).expect("stadium is a valid polygon")
}

/// The (p, q) torus knot on a torus with core radius `major` and tube radius `minor`.
pub fn torus_knot(p: u32, q: u32, n: usize, major: f64, minor: f64) -> Polygon {
    let (p, q) = (p as f64, q as f64);
    sample(n, |t| {
        let r = major + minor * (q * t).cos();
        Vec3::new(r * (p * t).cos(), r * (p * t).sin(), -minor * (q * t).sin())
    })
}

/// Standard trefoil start: the mirrored (2, 3) torus knot with 264 vertices.
///
/// Handedness is chosen so the tight trefoil has negative writhe, the
/// convention used for the base trefoil `3_1` throughout the toolkit.
pub fn trefoil_start() -> Polygon {
    torus_knot(2, 3, 264, 2.0, 1.0).mirrored()
}
