//! Tightens the standard trefoil start and writes the result.
//!
//! Usage: `tighten_trefoil [OUT]`. Takes about a minute in release mode.

use tightknot::analysis::{detect_features, writhe};
use tightknot::geom::ropelength_with_bound;
use tightknot::io::write_polygon;
use tightknot::starts::trefoil_start;
use tightknot::tighten::{tighten, TightenConfig};

fn main() -> Result<(), tightknot::Error> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "trefoil_tight.txt".into());
    let result = tighten(&trefoil_start(), &TightenConfig::default())?;
    let r = ropelength_with_bound(&result.polygon)?;
    let f = detect_features(&result.polygon)?;
    println!("steps     {}", result.steps_taken);
    println!("residual  {:.4}", result.residual());
    println!("prop      {:.4}", r.prop);
    println!("rop bound {:.4}", r.rop_bound.unwrap_or(f64::NAN));
    println!("writhe    {:.4}", writhe(&result.polygon)?);
    println!("kink runs {}", f.kink_runs.len());
    write_polygon(&out, &result.polygon)?;
    println!("wrote {out}");
    Ok(())
}
