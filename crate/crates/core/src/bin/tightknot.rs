use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tightknot::analysis::{
    connect_sum_csv, connect_sum_report, detect_features, writhe, writhe_additivity_report,
    writhe_report_csv, KnotLibrary,
};
use tightknot::composite::{
    enumerate_composites, generate_start_ensemble, read_prime_table, ropelength_classes,
};
use tightknot::geom::{polygon_length, ropelength_with_bound, thickness};
use tightknot::io::{format_polygon, read_polygon, write_polygon};
use tightknot::tighten::{mangle, residual_of, tighten, TightenConfig};
use tightknot::{Error, Polygon};

const EXIT_INPUT: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "tightknot", version, about = "Tighten polygonal knots towards ropelength minimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tighten a polygon until its residual drops below the target
    Tighten {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.01)]
        residual: f64,
        #[arg(long, default_value_t = 20000)]
        max_steps: usize,
        /// Edges per unit ropelength after resampling
        #[arg(long, default_value_t = 8.0)]
        resolution: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the per-step trace as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Build the connect-sum start ensemble of two tight polygons
    Splice {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 16)]
        max: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Randomly perturb a polygon while respecting its contacts
    Mangle {
        input: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print geometric measurements as JSON
    Measure { input: PathBuf },
    /// List composite knot types up to a crossing number
    Tabulate {
        #[arg(long)]
        primes: PathBuf,
        #[arg(long)]
        max_crossings: u32,
        /// Group labels that share a ropelength, one class per line
        #[arg(long)]
        classes: bool,
    },
    /// Conjecture reports over a directory of tight conformations
    Report {
        kind: ReportKind,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportKind {
    Writhe,
    Connectsum,
}

#[derive(Serialize)]
struct Measurement {
    vertices: usize,
    length: f64,
    thickness: f64,
    prop: f64,
    rop_bound: Option<f64>,
    resolution: f64,
    residual: f64,
    writhe: f64,
    kink_runs: Vec<Vec<usize>>,
    straight_runs: Vec<Vec<usize>>,
}

fn emit_polygon(p: &Polygon, out: Option<&Path>) -> tightknot::Result<()> {
    match out {
        Some(path) => write_polygon(path, p),
        None => {
            print!("{}", format_polygon(p));
            Ok(())
        }
    }
}

fn write_text(path: &Path, text: &str) -> tightknot::Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> tightknot::Result<u8> {
    match cli.command {
        Command::Tighten {
            input,
            out,
            residual,
            max_steps,
            resolution,
            seed,
            trace,
        } => {
            let p = read_polygon(&input)?;
            let cfg = TightenConfig {
                target_residual: residual,
                max_steps,
                target_resolution: resolution,
                rng_seed: seed,
                ..TightenConfig::default()
            };
            let result = tighten(&p, &cfg)?;
            emit_polygon(&result.polygon, out.as_deref())?;
            if let Some(path) = trace {
                write_text(&path, &result.trace_csv())?;
            }
            eprintln!(
                "steps {} prop {:.6} residual {:.3e}",
                result.steps_taken,
                result.prop(),
                result.residual()
            );
            Ok(if result.converged { 0 } else { EXIT_NOT_CONVERGED })
        }
        Command::Splice { a, b, max, out_dir } => {
            let p1 = read_polygon(&a)?;
            let p2 = read_polygon(&b)?;
            let starts = generate_start_ensemble(&p1, &p2, max)?;
            fs::create_dir_all(&out_dir).map_err(|e| Error::Io {
                path: out_dir.clone(),
                source: e,
            })?;
            for (i, s) in starts.iter().enumerate() {
                let path = out_dir.join(format!("start_{i:03}.txt"));
                write_polygon(&path, s)?;
                println!("{}", path.display());
            }
            Ok(0)
        }
        Command::Mangle {
            input,
            seed,
            steps,
            out,
        } => {
            let p = read_polygon(&input)?;
            emit_polygon(&mangle(&p, seed, steps)?, out.as_deref())?;
            Ok(0)
        }
        Command::Measure { input } => {
            let p = read_polygon(&input)?;
            let t = thickness(&p)?;
            let rop = ropelength_with_bound(&p)?;
            let features = detect_features(&p)?;
            let m = Measurement {
                vertices: p.len(),
                length: polygon_length(&p),
                thickness: t.thickness,
                prop: rop.prop,
                rop_bound: rop.rop_bound,
                resolution: rop.resolution,
                residual: residual_of(&p)?,
                writhe: writhe(&p)?,
                kink_runs: features.kink_runs,
                straight_runs: features.straight_runs,
            };
            let json = serde_json::to_string_pretty(&m).expect("measurement serializes");
            println!("{json}");
            Ok(0)
        }
        Command::Tabulate {
            primes,
            max_crossings,
            classes,
        } => {
            let table = read_prime_table(&primes)?;
            let labels = enumerate_composites(&table, max_crossings)?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            if classes {
                for class in ropelength_classes(&labels) {
                    let line: Vec<String> = class.iter().map(|l| l.to_string()).collect();
                    let _ = writeln!(out, "{}", line.join(" "));
                }
            } else {
                for label in &labels {
                    let _ = writeln!(out, "{label}");
                }
            }
            Ok(0)
        }
        Command::Report { kind, data, out } => {
            let lib = KnotLibrary::load(&data)?;
            let csv = match kind {
                ReportKind::Writhe => writhe_report_csv(&writhe_additivity_report(&lib)?),
                ReportKind::Connectsum => connect_sum_csv(&connect_sum_report(&lib)?),
            };
            write_text(&out, &csv)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NoConvergence { .. } | Error::Stalled { .. } => EXIT_NOT_CONVERGED,
                _ => EXIT_INPUT,
            })
        }
    }
}
