//! Writhe of a trefoil, its mirror image and a planar curve.

use tightknot::analysis::writhe;
use tightknot::starts::{ellipse, torus_knot, trefoil_start};

fn main() -> Result<(), tightknot::Error> {
    let t = trefoil_start();
    println!("trefoil        {:+.6}", writhe(&t)?);
    println!("mirror         {:+.6}", writhe(&t.mirrored())?);
    println!("relabeled      {:+.6}", writhe(&t.relabeled(17))?);
    println!("(2,5) torus    {:+.6}", writhe(&torus_knot(2, 5, 300, 2.0, 1.0))?);
    println!("ellipse        {:+.6}", writhe(&ellipse(50, 3.0, 1.0))?);
    Ok(())
}
