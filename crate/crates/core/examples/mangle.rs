//! Shakes a tight knot with random toroidal forces, then lets it settle again.
//!
//! Usage: `mangle [IN] [SEED]`, default the shipped tight trefoil.

use tightknot::geom::ropelength;
use tightknot::io::read_polygon;
use tightknot::tighten::{mangle, tighten, TightenConfig};

fn main() -> Result<(), tightknot::Error> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/primes/3_1.txt").into());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let tight = read_polygon(&path)?;
    let shaken = mangle(&tight, seed, 200)?;
    let cfg = TightenConfig {
        max_steps: 300,
        ..TightenConfig::default()
    };
    let settled = tighten(&shaken, &cfg)?;
    println!("tight    prop {:.4}", ropelength(&tight)?.prop);
    println!("mangled  prop {:.4}", ropelength(&shaken)?.prop);
    println!("settled  prop {:.4}  residual {:.4}", settled.prop(), settled.residual());
    Ok(())
}
