//! Thickness and ropelength of a few simple polygons.

use std::f64::consts::PI;

use tightknot::geom::{ropelength_with_bound, thickness};
use tightknot::starts::{regular_polygon, stadium, trefoil_start};

fn main() -> Result<(), tightknot::Error> {
    for n in [4, 6, 64, 512] {
        let p = regular_polygon(n, 1.0);
        let r = ropelength_with_bound(&p)?;
        let exact = 2.0 * n as f64 * (PI / n as f64).tan();
        println!(
            "{n:>3}-gon  prop {:.12}  exact {exact:.12}  smoothed bound {:.9}",
            r.prop,
            r.rop_bound.unwrap_or(f64::NAN)
        );
    }
    println!("2 pi        {:.9}", 2.0 * PI);

    let s = stadium(10.0, 2.0, 30, 40);
    println!("stadium     {:?}", thickness(&s)?);

    let t = trefoil_start();
    let b = thickness(&t)?;
    println!(
        "trefoil     thickness {:.4} ({:?}), prop {:.3}",
        b.thickness,
        b.controlling_feature,
        ropelength_with_bound(&t)?.prop
    );
    Ok(())
}
