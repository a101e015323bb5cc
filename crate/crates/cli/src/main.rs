//! `hyplobe`: command-line experiments with hyperbolic triangles and polygons.
//!
//! Exit codes: 0 success, 1 a `verify` property failed, 2 bad input,
//! 3 a Steiner run did not converge (outputs are still written).

mod commands;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hyplobe",
    version,
    about = "Hyperbolic triangles, maximal areas and isoperimetric experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a triangle from two sides and the included angle.
    Triangle(TriangleArgs),
    /// Find the included angle of maximal area.
    Optimize(OptimizeArgs),
    /// Improve a random convex polygon towards a circle.
    Steiner(SteinerArgs),
    /// Regular polygons of fixed perimeter against the circle.
    Isoperimetric(IsoperimetricArgs),
    /// Run the property and oracle checks.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct TriangleArgs {
    #[arg(long)]
    b: f64,
    #[arg(long)]
    c: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct OptimizeArgs {
    #[arg(long)]
    b: f64,
    #[arg(long)]
    c: f64,
    /// Grid size of the brute-force cross-check.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SteinerArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 10_000)]
    max_sweeps: usize,
    /// Also write the trace as CSV to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// `json` is the run summary, `csv` the trace, `svg` a drawing.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct IsoperimetricArgs {
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 96)]
    n_max: usize,
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    perimeter: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<verify::Fault>,
    #[command(flatten)]
    out: Output,
}

/// A failure mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Verify(String),
    NotConverged(String),
    Io(String),
}

impl From<hyplobe::GeometryError> for Failure {
    fn from(e: hyplobe::GeometryError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn emit(out: &Output, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Triangle(a) => emit(&a.out, &commands::triangle(a.b, a.c, a.alpha, a.format)?),
        Command::Optimize(a) => emit(&a.out, &commands::optimize(a.b, a.c, a.samples, a.format)?),
        Command::Isoperimetric(a) => emit(
            &a.out,
            &commands::isoperimetric(a.n_min, a.n_max, a.perimeter, a.format)?,
        ),
        Command::Steiner(a) => {
            let run = commands::steiner(a.n, a.seed, a.tol, a.max_sweeps)?;
            if let Some(path) = &a.trace {
                fs::write(path, run.trace_csv())
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            emit(&a.out, &run.render(a.format)?)?;
            if run.outcome.converged {
                Ok(())
            } else {
                Err(Failure::NotConverged(format!(
                    "no convergence after {} sweeps (max residual {:e})",
                    run.outcome.sweeps, run.outcome.max_residual
                )))
            }
        }
        Command::Verify(a) => {
            let report = verify::run(a.samples, a.seed, a.inject_fault)?;
            emit(&a.out, &report.text())?;
            match report.first_failure() {
                None => Ok(()),
                Some(name) => Err(Failure::Verify(format!("property failed: {name}"))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Keep the diagnostic to the first line of clap's message.
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("hyplobe: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Verify(m) => (1, m),
                Failure::Input(m) | Failure::Io(m) => (2, m),
                Failure::NotConverged(m) => (3, m),
            };
            eprintln!("hyplobe: {msg}");
            ExitCode::from(code)
        }
    }
}
