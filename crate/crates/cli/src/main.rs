//! `dtmm`: solve, tabulate basis functions, scan Bloch bands and compare
//! against the reference integrator. Results go out as CSV.
//!
//! Exit status: 0 on success, 1 on numerical failure, 2 on bad input.

mod commands;
mod config;
mod number;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dtmm_core::Error;

use commands::{BasisArgs, Overrides, Report};
use config::ProblemConfig;

#[derive(Debug, Parser)]
#[command(name = "dtmm", version, about = "Transfer-matrix solver for y'' + f(x) y = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON problem description.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (standard output when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of sections, overriding the config.
    #[arg(long)]
    sections: Option<usize>,
    /// Apply the commutator correction.
    #[arg(long, conflicts_with = "uncorrected")]
    corrected: bool,
    /// Skip the commutator correction.
    #[arg(long)]
    uncorrected: bool,
    /// Samples per section (solve, compare) or rows (basis).
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        let corrected = match (self.corrected, self.uncorrected) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        };
        Overrides { sections: self.sections, corrected, samples: self.samples }
    }

    fn load(&self) -> Result<ProblemConfig, Error> {
        match &self.config {
            Some(path) => ProblemConfig::load(path),
            None => Ok(ProblemConfig::default()),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Propagate the initial state across the domain: `x,u,v,du,dv`.
    Solve(Common),
    /// Tabulate Ψ₁..Ψ₄ next to the WKB pair.
    Basis {
        #[command(flatten)]
        common: Common,
        /// Real coefficient g(x).
        #[arg(long)]
        g: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
    },
    /// Bloch wavenumbers over an energy range for g = E - V(x).
    Band(Common),
    /// DTMM against the reference integrator; summary on standard error.
    Compare(Common),
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), Error> {
    let (report, out) = match cli.command {
        Command::Solve(c) => (commands::solve(&c.load()?, &c.overrides())?, c.out),
        Command::Basis { common, g, alpha, x_max } => {
            let args = BasisArgs { g, alpha, x_max };
            (commands::basis(&common.load()?, &args, &common.overrides())?, common.out)
        }
        Command::Band(c) => (commands::band(&c.load()?, &c.overrides())?, c.out),
        Command::Compare(c) => (commands::compare(&c.load()?, &c.overrides())?, c.out),
    };
    Ok((report, out))
}

fn emit(report: &Report, out: Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, &report.csv),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&report.csv)?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, out)) => {
            if let Err(e) = emit(&report, out) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if let Some(summary) = &report.summary {
                eprintln!("{summary}");
            }
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
