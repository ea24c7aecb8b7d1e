#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tightknot::geom::thickness;
use tightknot::starts::torus_knot;
use tightknot::{Polygon, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixtures").join(name)
}

/// A torus knot with every vertex jittered, kept only if it stays embedded
/// and is fine enough (edges below 1) once scaled to unit thickness.
pub fn jittered_torus_knot(rng: &mut ChaCha8Rng) -> Polygon {
    let pairs = [(2, 3), (2, 5), (3, 4), (2, 7), (3, 5)];
    loop {
        let (p, q) = pairs[rng.gen_range(0..pairs.len())];
        let n = rng.gen_range(100..200);
        let base = torus_knot(p, q, n, 2.0, rng.gen_range(0.6..1.0));
        let jitter = 0.15 * 2.0 * std::f64::consts::PI * 2.0 / n as f64;
        let v: Vec<Vec3> = base
            .vertices()
            .iter()
            .map(|&x| x + random_vec(rng) * jitter)
            .collect();
        if let Ok(poly) = Polygon::new(v) {
            if let Ok(t) = thickness(&poly) {
                let longest = poly.edge_lengths().into_iter().fold(0.0, f64::max);
                if t.embedded && longest < t.thickness {
                    return poly;
                }
            }
        }
    }
}

/// Random closed polygon with `n` vertices in a unit-ish box.
pub fn random_polygon(rng: &mut ChaCha8Rng, n: usize) -> Polygon {
    loop {
        let v: Vec<Vec3> = (0..n).map(|_| random_vec(rng) * 3.0).collect();
        if let Ok(p) = Polygon::new(v) {
            return p;
        }
    }
}

pub fn random_vec(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_rotation(rng: &mut ChaCha8Rng) -> nalgebra::Rotation3<f64> {
    let axis = nalgebra::Unit::new_normalize(random_vec(rng) + Vec3::new(0.0, 0.0, 1e-3));
    nalgebra::Rotation3::from_axis_angle(&axis, rng.gen_range(0.0..std::f64::consts::TAU))
}
