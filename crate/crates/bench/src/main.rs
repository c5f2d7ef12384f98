use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symspace::KarcherOptions64;
use symspace_bench::output::{census_csv, convergence_csv};
use symspace_bench::{
    run_convergence, run_signature_census, BenchError, ConvergenceStudy, GridSpec, MetricKind, Result, Scheme,
};

#[derive(Parser)]
#[command(name = "symspace-bench", version, about = "Interpolation error and signature studies for metric fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L² and H¹ errors with dyadic convergence orders.
    Convergence {
        #[command(flatten)]
        common: Common,
        /// Quadrature points per axis.
        #[arg(long, default_value_t = 4)]
        quad: usize,
    },
    /// Signature of the interpolant at every quadrature point.
    Census {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        quad: usize,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "schwarzschild")]
    metric: MetricKind,
    /// Schwarzschild radius.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Subdivisions per axis [default: 2,4,8,16 for convergence, 2 for census].
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Polynomial degrees [default: 1,2 for convergence, 1 for census].
    #[arg(long, value_delimiter = ',')]
    degree: Option<Vec<usize>>,
    #[arg(long, default_value = "symspace")]
    scheme: Scheme,
    /// Write to this file instead of stdout; `.json` selects JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Karcher residual tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Karcher iteration cap.
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
}

impl Common {
    fn karcher(&self) -> KarcherOptions64 {
        KarcherOptions64 { tol: self.tol, max_iter: self.max_iter, truncate: false }
    }
}

fn is_json(path: Option<&Path>) -> bool {
    path.and_then(Path::extension).is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn emit(out: Option<&Path>, text: String) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Returns the number of elements whose interpolant failed.
fn run(cli: Cli) -> Result<usize> {
    match cli.command {
        Command::Convergence { common, quad } => {
            let metric = common.metric.with_radius(common.radius);
            let ns = common.n.clone().unwrap_or_else(|| vec![2, 4, 8, 16]);
            let degrees = common.degree.clone().unwrap_or_else(|| vec![1, 2]);
            let mut study = ConvergenceStudy::new(ns, degrees, common.scheme, quad);
            study.karcher = common.karcher();
            for &n in &study.ns {
                for &k in &study.degrees {
                    GridSpec::new(n, k, study.scheme, quad).validate(true)?;
                }
            }
            let report = run_convergence(&study, &metric)?;
            let text = if is_json(common.out.as_deref()) {
                serde_json::to_string_pretty(&report)? + "\n"
            } else {
                convergence_csv(&report)
            };
            emit(common.out.as_deref(), text)?;
            Ok(report.failed_elements())
        }
        Command::Census { common, quad } => {
            let metric = common.metric.with_radius(common.radius);
            let degree = match common.degree.as_deref() {
                None => 1,
                Some(&[k]) => k,
                Some(_) => return Err(BenchError::InvalidSpec("census takes a single --degree".into())),
            };
            let ns = common.n.clone().unwrap_or_else(|| vec![2]);
            let censuses = ns
                .iter()
                .map(|&n| {
                    run_signature_census(&GridSpec::new(n, degree, common.scheme, quad), &metric, common.karcher())
                })
                .collect::<Result<Vec<_>>>()?;
            let text = if is_json(common.out.as_deref()) {
                serde_json::to_string_pretty(&censuses)? + "\n"
            } else {
                census_csv(&censuses)
            };
            emit(common.out.as_deref(), text)?;
            Ok(censuses.iter().map(|c| c.count(symspace_bench::census::FAILED)).sum())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("error: interpolation left the chart domain ({failed} failures)");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
