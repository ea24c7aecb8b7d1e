//! Independent reference computations shared by the oracle and acceptance tests.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tightknot::contact::{RigidityMatrix, SparseColumn};
use tightknot::Polygon;

/// Step of the central differences.
pub const FD_STEP: f64 = 1e-6;

/// Random sparse columns over `rows` coordinates, a few nonzeros each.
pub fn random_snnls_instance(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> (RigidityMatrix, Vec<f64>) {
    let columns = (0..cols)
        .map(|_| {
            let nnz = rng.gen_range(1..=4.min(rows));
            let mut entries: Vec<(usize, f64)> = Vec::new();
            while entries.len() < nnz {
                let r = rng.gen_range(0..rows);
                if entries.iter().all(|e| e.0 != r) {
                    entries.push((r, rng.gen_range(-1.0..1.0)));
                }
            }
            entries.sort_by_key(|e| e.0);
            SparseColumn { entries }
        })
        .collect();
    let g = (0..rows).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (RigidityMatrix::new(rows, columns), g)
}

pub fn dense(a: &RigidityMatrix) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.rows, a.ncols());
    for (j, c) in a.columns.iter().enumerate() {
        for &(i, v) in &c.entries {
            m[(i, j)] = v;
        }
    }
    m
}

/// Minimum of `|g - A x|^2` over `x >= 0` by trying every support set.
///
/// On each support the unconstrained least-squares solution (via SVD, so
/// rank-deficient supports are fine) is kept if it is non-negative.
pub fn subset_oracle(a: &DMatrix<f64>, g: &DVector<f64>) -> f64 {
    let k = a.ncols();
    let mut best = g.norm_squared();
    for mask in 1u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let sub = a.select_columns(&support);
        let svd = sub.clone().svd(true, true);
        let Ok(x) = svd.solve(g, 1e-12) else { continue };
        if x.iter().all(|&v| v >= -1e-12) {
            best = best.min((g - &sub * x).norm_squared());
        }
    }
    best
}

/// `|g - A lambda|^2` and the subset oracle's optimum for the same instance.
pub fn objective_and_oracle(a: &RigidityMatrix, g: &[f64], lambda: &[f64]) -> (f64, f64, f64) {
    let am = dense(a);
    let gv = DVector::from_vec(g.to_vec());
    let ours = (&gv - &am * DVector::from_vec(lambda.to_vec())).norm_squared();
    (ours, subset_oracle(&am, &gv), gv.norm_squared())
}

/// The first violated KKT condition, if any.
pub fn kkt_violation(a: &RigidityMatrix, g: &[f64], lambda: &[f64], resolved: &[f64]) -> Option<String> {
    let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let tol = 1e-9 * gn.max(1.0);
    let r: Vec<f64> = g.iter().zip(a.mul(lambda)).map(|(gi, ai)| gi - ai).collect();
    if r.iter().zip(resolved).any(|(x, y)| (x - y).abs() > tol) {
        return Some("resolved is not g - A lambda".into());
    }
    let w = a.tmul(&r);
    for (j, (&l, &wj)) in lambda.iter().zip(&w).enumerate() {
        if l < 0.0 {
            return Some(format!("lambda[{j}] = {l}"));
        }
        if wj > tol {
            return Some(format!("dual infeasible at {j}: {wj}"));
        }
        if l > 0.0 && wj.abs() > tol {
            return Some(format!("complementarity fails at {j}: {wj}"));
        }
    }
    None
}

pub fn central_difference(p: &Polygon, f: impl Fn(&Polygon) -> f64) -> Vec<f64> {
    let flat = p.to_flat();
    let mut out = vec![0.0; flat.len()];
    for i in 0..flat.len() {
        let mut plus = flat.clone();
        let mut minus = flat.clone();
        plus[i] += FD_STEP;
        minus[i] -= FD_STEP;
        let at = |x: &[f64]| {
            let q = Polygon::from_coords(x.chunks(3).map(|c| [c[0], c[1], c[2]])).unwrap();
            f(&q)
        };
        out[i] = (at(&plus) - at(&minus)) / (2.0 * FD_STEP);
    }
    out
}

pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / scale
}

/// Samples two points uniformly by arc length and averages the Gauss
/// integrand. Returns the estimate and its standard error.
pub fn monte_carlo_writhe(p: &Polygon, samples: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let n = p.len();
    let lengths = p.edge_lengths();
    let total: f64 = lengths.iter().sum();
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for l in &lengths {
        acc += l;
        cumulative.push(acc);
    }
    let pick = |rng: &mut ChaCha8Rng| {
        let s = rng.gen_range(0.0..total);
        let e = cumulative.partition_point(|&c| c < s).min(n - 1);
        let (a, b) = p.edge(e);
        let u = rng.gen::<f64>();
        (a + (b - a) * u, (b - a) / lengths[e])
    };
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let (x, tx) = pick(rng);
        let (y, ty) = pick(rng);
        let d = x - y;
        let r = d.norm();
        let f = if r < 1e-12 {
            0.0
        } else {
            total * total * tx.cross(&ty).dot(&d) / (4.0 * PI * r * r * r)
        };
        sum += f;
        sum_sq += f * f;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    (mean, (var / samples as f64).sqrt())
}
