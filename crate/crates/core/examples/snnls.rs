//! Resolving a force against two struts holding a vertex.
//!
//! A single free point is pushed diagonally into the corner formed by two
//! walls. The walls absorb the push completely; pushing away from one wall
//! leaves a residual that slides along the other.

use tightknot::contact::{RigidityMatrix, SparseColumn};
use tightknot::snnls::solve_snnls;

fn main() -> Result<(), tightknot::Error> {
    let walls = RigidityMatrix::new(
        3,
        vec![
            SparseColumn { entries: vec![(0, 1.0)] },
            SparseColumn { entries: vec![(1, 1.0)] },
        ],
    );
    for g in [[1.0, 1.0, 0.0], [1.0, -1.0, 0.0], [0.5, 2.0, 1.0]] {
        let s = solve_snnls(&walls, &g)?;
        println!(
            "g = {g:?}  lambda = {:?}  resolved = {:?}  residual {:.3}",
            s.lambda, s.resolved, s.residual_fraction
        );
    }
    Ok(())
}
