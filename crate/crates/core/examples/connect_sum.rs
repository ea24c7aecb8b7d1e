//! Builds granny and square knot start ensembles from the tight trefoil.
//!
//! Usage: `connect_sum [TIGHT_TREFOIL]`.

use tightknot::composite::{generate_start_ensemble, hull_arcs};
use tightknot::geom::ropelength;
use tightknot::io::read_polygon;

fn main() -> Result<(), tightknot::Error> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/primes/3_1.txt").into());
    let trefoil = read_polygon(&path)?;
    let arcs = hull_arcs(&trefoil);
    println!("hull arcs: {:?}", arcs.iter().map(Vec::len).collect::<Vec<_>>());
    for (name, other) in [("granny", trefoil.clone()), ("square", trefoil.mirrored())] {
        let starts = generate_start_ensemble(&trefoil, &other, 9)?;
        let props: Result<Vec<f64>, _> = starts.iter().map(|p| ropelength(p).map(|r| r.prop)).collect();
        println!("{name}: {} starts, prop {:.2?}", starts.len(), props?);
    }
    Ok(())
}
