//! Sparse non-negative least squares, `min |A x - g|` subject to `x >= 0`.
//!
//! Lawson-Hanson active-set method. The Cholesky factor of `A_P^T A_P` for the
//! passive set `P` is grown one column at a time and downdated with Givens
//! rotations when columns leave. Columns numerically dependent on the current
//! passive set are set aside until the set next shrinks; the least-squares
//! residual is orthogonal to them anyway.

use crate::contact::{RigidityMatrix, SparseColumn};
use crate::error::{Error, Result};

/// Result of [`solve_snnls`].
#[derive(Debug, Clone, PartialEq)]
pub struct SnnlsSolution {
    /// Non-negative multipliers, one per column.
    pub lambda: Vec<f64>,
    /// `g - A lambda`.
    pub resolved: Vec<f64>,
    /// `|resolved| / |g|`, zero when `g` is zero.
    pub residual_fraction: f64,
    pub iterations: usize,
}

/// Relative tolerance for the dual feasibility test.
pub const KKT_TOL: f64 = 1e-10;
const TIE_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-12;

pub fn solve_snnls(a: &RigidityMatrix, g: &[f64]) -> Result<SnnlsSolution> {
    solve_snnls_warm(a, g, &[])
}

/// [`solve_snnls`] starting from a guessed passive set, typically the columns
/// that carried force in a previous, nearby problem. The guess only affects
/// the iteration count, never the contract of the result.
pub fn solve_snnls_warm(a: &RigidityMatrix, g: &[f64], warm: &[usize]) -> Result<SnnlsSolution> {
    if g.len() != a.rows {
        return Err(Error::InvalidInput(format!(
            "right-hand side has {} entries, matrix has {} rows",
            g.len(),
            a.rows
        )));
    }
    let k = a.ncols();
    if let Some(&bad) = warm.iter().find(|&&j| j >= k) {
        return Err(Error::InvalidInput(format!(
            "warm-start column {bad} out of range for {k} columns"
        )));
    }
    let g_norm = norm(g);
    if g_norm == 0.0 || k == 0 {
        return Ok(SnnlsSolution {
            lambda: vec![0.0; k],
            resolved: g.to_vec(),
            residual_fraction: if g_norm == 0.0 { 0.0 } else { 1.0 },
            iterations: 0,
        });
    }
    let cols = &a.columns;
    let col_g: Vec<f64> = cols.iter().map(|c| c.dot_dense(g)).collect();
    let tol = KKT_TOL * g_norm * cols.iter().map(SparseColumn::norm).fold(0.0, f64::max);
    let max_iter = 50 * k.max(1);

    let mut state = ActiveSet::new(a.rows, k);
    let mut lambda = vec![0.0; k];
    let mut resolved = g.to_vec();
    let mut just_removed: Vec<usize> = Vec::new();
    let mut iterations = 0;

    for &j in warm {
        if state.available(j) {
            state.push(cols, j);
        }
    }
    if !state.passive.is_empty() {
        state.settle(cols, &col_g, g, &mut lambda, &mut just_removed);
        state.residual(cols, g, &lambda, &mut resolved);
    }

    loop {
        // Entering column: largest positive correlation, ties to the lowest index.
        let w: Vec<f64> = cols.iter().map(|c| c.dot_dense(&resolved)).collect();
        let mut best_w = f64::NEG_INFINITY;
        for j in 0..k {
            if state.available(j) && !just_removed.contains(&j) {
                best_w = best_w.max(w[j]);
            }
        }
        if best_w <= tol {
            break;
        }
        let entering = (0..k)
            .find(|&j| {
                state.available(j) && !just_removed.contains(&j) && w[j] >= best_w - TIE_TOL * g_norm
            })
            .expect("maximum is attained");
        just_removed.clear();

        iterations += 1;
        if iterations > max_iter {
            return Err(no_convergence(iterations, lambda, resolved, g_norm));
        }
        if !state.push(cols, entering) {
            continue;
        }
        state.settle(cols, &col_g, g, &mut lambda, &mut just_removed);
        state.residual(cols, g, &lambda, &mut resolved);
    }

    let r_norm = norm(&resolved);
    Ok(SnnlsSolution {
        lambda,
        resolved,
        residual_fraction: r_norm / g_norm,
        iterations,
    })
}

fn no_convergence(iterations: usize, lambda: Vec<f64>, resolved: Vec<f64>, g_norm: f64) -> Error {
    let r = norm(&resolved);
    Error::NoConvergence {
        iterations,
        best: Box::new(SnnlsSolution {
            lambda,
            resolved,
            residual_fraction: r / g_norm,
            iterations,
        }),
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Passive set with the lower-triangular Cholesky factor of its Gram matrix.
struct ActiveSet {
    passive: Vec<usize>,
    in_passive: Vec<bool>,
    dependent: Vec<bool>,
    /// Row `i` holds `L[i][0..=i]`.
    chol: Vec<Vec<f64>>,
    scratch: Vec<f64>,
}

impl ActiveSet {
    fn new(rows: usize, k: usize) -> Self {
        ActiveSet {
            passive: Vec::new(),
            in_passive: vec![false; k],
            dependent: vec![false; k],
            chol: Vec::new(),
            scratch: vec![0.0; rows],
        }
    }

    fn available(&self, j: usize) -> bool {
        !self.in_passive[j] && !self.dependent[j]
    }

    /// Appends column `j`; returns false (and marks it dependent) if it lies in the current span.
    fn push(&mut self, cols: &[SparseColumn], j: usize) -> bool {
        let cj = &cols[j];
        for &(r, v) in &cj.entries {
            self.scratch[r] = v;
        }
        let c: Vec<f64> = self
            .passive
            .iter()
            .map(|&p| cols[p].dot_dense(&self.scratch))
            .collect();
        for &(r, _) in &cj.entries {
            self.scratch[r] = 0.0;
        }
        let y = forward(&self.chol, &c);
        let jj = cj.entries.iter().map(|&(_, v)| v * v).sum::<f64>();
        let d2 = jj - y.iter().map(|v| v * v).sum::<f64>();
        if d2 <= PIVOT_TOL * jj {
            self.dependent[j] = true;
            return false;
        }
        let mut row = y;
        row.push(d2.sqrt());
        self.chol.push(row);
        self.passive.push(j);
        self.in_passive[j] = true;
        true
    }

    /// Drops column `j` from the passive set, restoring the triangular factor with Givens rotations.
    fn remove(&mut self, j: usize) {
        let pos = self
            .passive
            .iter()
            .position(|&p| p == j)
            .expect("column is passive");
        self.passive.remove(pos);
        self.in_passive[j] = false;
        self.chol.remove(pos);
        let k = self.chol.len();
        for c in pos..k {
            let (a, b) = (self.chol[c][c], self.chol[c][c + 1]);
            let r = a.hypot(b);
            let (cos, sin) = (a / r, b / r);
            for row in &mut self.chol[c..] {
                let (x, y) = (row[c], row[c + 1]);
                row[c] = cos * x + sin * y;
                row[c + 1] = -sin * x + cos * y;
            }
            self.chol[c].truncate(c + 1);
        }
        // the span shrank, so previously dependent columns may be usable again
        self.dependent.iter_mut().for_each(|d| *d = false);
    }

    /// Inner Lawson-Hanson loop: moves `lambda` to the least-squares solution on
    /// the passive set, dropping columns whose multipliers would go negative.
    fn settle(
        &mut self,
        cols: &[SparseColumn],
        col_g: &[f64],
        g: &[f64],
        lambda: &mut [f64],
        just_removed: &mut Vec<usize>,
    ) {
        while !self.passive.is_empty() {
            let mut z = self.solve_unrefined(col_g);
            // refinement only matters for the coefficients that are kept
            if z.iter().all(|&zi| zi > 0.0) {
                self.refine(cols, g, &mut z);
            }
            if z.iter().all(|&zi| zi > 0.0) {
                for (&p, &zi) in self.passive.iter().zip(&z) {
                    lambda[p] = zi;
                }
                return;
            }
            // Step towards z until the first multiplier reaches zero.
            let mut alpha = 1.0f64;
            for (&p, &zi) in self.passive.iter().zip(&z) {
                if zi <= 0.0 {
                    let l = lambda[p];
                    alpha = alpha.min(if l - zi > 0.0 { l / (l - zi) } else { 0.0 });
                }
            }
            for (&p, &zi) in self.passive.iter().zip(&z) {
                lambda[p] += alpha * (zi - lambda[p]);
            }
            let scale = self.passive.iter().map(|&p| lambda[p]).fold(0.0, f64::max);
            let mut leaving: Vec<usize> = self
                .passive
                .iter()
                .zip(&z)
                .filter(|&(&p, &zi)| zi <= 0.0 && lambda[p] <= 1e-14 * scale)
                .map(|(&p, _)| p)
                .collect();
            // The minimizing index always reaches zero, up to rounding.
            if leaving.is_empty() {
                let (&p, _) = self
                    .passive
                    .iter()
                    .zip(&z)
                    .filter(|&(_, &zi)| zi <= 0.0)
                    .min_by(|x, y| lambda[*x.0].total_cmp(&lambda[*y.0]))
                    .expect("some multiplier is non-positive");
                leaving.push(p);
            }
            for &p in &leaving {
                lambda[p] = 0.0;
                self.remove(p);
            }
            just_removed.extend_from_slice(&leaving);
        }
    }

    fn residual(&self, cols: &[SparseColumn], g: &[f64], lambda: &[f64], out: &mut [f64]) {
        out.copy_from_slice(g);
        for &p in &self.passive {
            cols[p].axpy(-lambda[p], out);
        }
    }

    /// Least-squares coefficients on the passive set from the normal equations.
    fn solve_unrefined(&self, col_g: &[f64]) -> Vec<f64> {
        let rhs: Vec<f64> = self.passive.iter().map(|&p| col_g[p]).collect();
        backward(&self.chol, &forward(&self.chol, &rhs))
    }

    /// One step of iterative refinement against the true residual.
    fn refine(&self, cols: &[SparseColumn], g: &[f64], z: &mut [f64]) {
        let mut r = g.to_vec();
        for (&p, &zi) in self.passive.iter().zip(z.iter()) {
            cols[p].axpy(-zi, &mut r);
        }
        let rhs2: Vec<f64> = self.passive.iter().map(|&p| cols[p].dot_dense(&r)).collect();
        let dz = backward(&self.chol, &forward(&self.chol, &rhs2));
        for (zi, d) in z.iter_mut().zip(dz) {
            *zi += d;
        }
    }
}

fn forward(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let mut y = Vec::with_capacity(b.len());
    for (i, row) in l.iter().enumerate() {
        let s: f64 = row[..i].iter().zip(&y).map(|(a, b)| a * b).sum();
        y.push((b[i] - s) / row[i]);
    }
    y
}

fn backward(l: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut x = y.to_vec();
    for i in (0..n).rev() {
        x[i] /= l[i][i];
        let xi = x[i];
        for (j, xj) in x.iter_mut().enumerate().take(i) {
            *xj -= l[i][j] * xi;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: usize, cols: &[&[f64]]) -> RigidityMatrix {
        RigidityMatrix::new(
            rows,
            cols.iter()
                .map(|c| SparseColumn {
                    entries: c
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| **v != 0.0)
                        .map(|(i, v)| (i, *v))
                        .collect(),
                })
                .collect(),
        )
    }

    #[test]
    fn identity_clips_negative_components() {
        let a = dense(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let s = solve_snnls(&a, &[1.0, -2.0, 3.0]).unwrap();
        assert_eq!(s.lambda, vec![1.0, 0.0, 3.0]);
        assert_eq!(s.resolved, vec![0.0, -2.0, 0.0]);
    }

    #[test]
    fn duplicate_columns_are_tolerated() {
        let a = dense(2, &[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let s = solve_snnls(&a, &[2.0, 1.0]).unwrap();
        assert!((s.lambda[0] + s.lambda[1] - 2.0).abs() < 1e-14);
        assert!(s.residual_fraction < 1e-14);
    }

    #[test]
    fn empty_matrix_leaves_everything_unresolved() {
        let a = RigidityMatrix::new(2, vec![]);
        let s = solve_snnls(&a, &[1.0, 1.0]).unwrap();
        assert_eq!(s.residual_fraction, 1.0);
    }

    #[test]
    fn wrong_shape_is_rejected() {
        let a = dense(2, &[&[1.0, 0.0]]);
        assert!(solve_snnls(&a, &[1.0]).is_err());
    }
}
