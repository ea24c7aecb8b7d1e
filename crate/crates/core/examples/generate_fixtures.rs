//! Regenerates the tight fixtures under `data/fixtures`.
//!
//! Usage: `generate_fixtures [DIR] [STARTS] [MAX_STEPS]`.
//! Tightens the standard trefoil, then splices it with itself and with its
//! mirror, tightening the first STARTS ensemble members of each and keeping
//! the shortest. Composite files record the number of starts tried.
//! Expect a few hours on one core with the defaults.

use std::path::PathBuf;
use std::time::Instant;

use tightknot::composite::generate_start_ensemble;
use tightknot::io::{format_polygon, write_polygon};
use tightknot::starts::trefoil_start;
use tightknot::tighten::{best_of_ensemble, tighten, TightenConfig};
use tightknot::Error;

fn main() -> Result<(), Error> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "data/fixtures".into()));
    let starts: usize = args.next().map_or(1, |s| s.parse().expect("STARTS is a count"));
    let max_steps: usize = args.next().map_or(20_000, |s| s.parse().expect("MAX_STEPS is a count"));
    let io_err = |path: PathBuf| move |source| Error::Io { path, source };

    for sub in ["primes", "composites"] {
        std::fs::create_dir_all(dir.join(sub)).map_err(io_err(dir.join(sub)))?;
    }

    let clock = Instant::now();
    let trefoil = tighten(&trefoil_start(), &TightenConfig::default())?;
    println!(
        "3_1      prop {:.4} residual {:.4} ({:.0?})",
        trefoil.prop(),
        trefoil.residual(),
        clock.elapsed()
    );
    write_polygon(dir.join("primes/3_1.txt"), &trefoil.polygon)?;

    let cfg = TightenConfig {
        max_steps,
        ..TightenConfig::default()
    };
    let t = &trefoil.polygon;
    for (label, other) in [("3_1#3_1", t.clone()), ("3_1#3_1m", t.mirrored())] {
        let clock = Instant::now();
        let ensemble = generate_start_ensemble(t, &other, starts)?;
        let best = best_of_ensemble(&ensemble, &cfg)?;
        println!(
            "{label:8} prop {:.4} residual {:.4} steps {} ({:.0?})",
            best.prop(),
            best.residual(),
            best.steps_taken,
            clock.elapsed()
        );
        let path = dir.join(format!("composites/{label}.txt"));
        let text = format!("# starts {}\n{}", ensemble.len(), format_polygon(&best.polygon));
        std::fs::write(&path, text).map_err(io_err(path.clone()))?;
    }
    Ok(())
}
