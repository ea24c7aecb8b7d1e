//! Tightens a 64-gon ellipse; the minimizer is the regular 64-gon.

use std::f64::consts::PI;

use tightknot::starts::ellipse;
use tightknot::tighten::{tighten, TightenConfig};

fn main() -> Result<(), tightknot::Error> {
    let start = ellipse(64, 3.0, 1.0);
    let cfg = TightenConfig {
        target_residual: 1e-3,
        resample_every: 0,
        ..TightenConfig::default()
    };
    let result = tighten(&start, &cfg)?;
    let n = 64.0;
    let optimum = 2.0 * n * (PI / n).tan();
    println!("steps      {}", result.steps_taken);
    println!("converged  {}", result.converged);
    println!("residual   {:.3e}", result.residual());
    println!("prop       {:.6}", result.prop());
    println!("optimum    {optimum:.6}");
    println!("excess     {:.4}%", 100.0 * (result.prop() / optimum - 1.0));
    Ok(())
}
