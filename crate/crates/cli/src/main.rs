//! `ftlab {noise|solve|verify|contraction} --config PATH --out DIR [--noise PATH]`
//!
//! Exit codes: 0 success, 1 I/O or numerical failure, 2 invalid config or
//! parameter gate, 3 Picard iteration did not converge, 4 a bound check
//! failed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod manifest;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ftlab",
    version,
    about = "Transport equation with rough drift: noise, solver and bound checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Flat `key = value` file; `FT_<KEY>` environment variables override it.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct WithNoise {
    #[command(flatten)]
    common: Common,
    /// `Z` as an FTF field file instead of synthesizing it from the config.
    #[arg(long)]
    noise: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize B and Z = ψB, with covariance and regularity reports.
    Noise(Common),
    /// Picard iteration for the mild solution.
    Solve(WithNoise),
    /// Product, smoothing, Hölder-defect and singular-integral bound checks.
    Verify(Common),
    /// Empirical contraction constants c(ρ).
    Contraction(WithNoise),
}

fn run(cli: Cli) -> Result<(), error::CliError> {
    match cli.cmd {
        Cmd::Noise(a) => commands::noise(&config::load(&a.config)?, &a.out),
        Cmd::Solve(a) => commands::solve(
            &config::load(&a.common.config)?,
            a.noise.as_deref(),
            &a.common.out,
        ),
        Cmd::Verify(a) => commands::verify(&config::load(&a.config)?, &a.out),
        Cmd::Contraction(a) => commands::contraction(
            &config::load(&a.common.config)?,
            a.noise.as_deref(),
            &a.common.out,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ftlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
