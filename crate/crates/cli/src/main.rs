#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;
mod svg;

use commands::Failure;
use output::OutputSpec;

/// Three-parametric Marcenko-Pastur density toolkit.
#[derive(Debug, Parser)]
#[command(name = "mp3", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Density curve rho(x; r, t, a) on a uniform grid.
    Density(commands::DensityArgs),
    /// Support edges (x_L, x_R) as functions of t.
    Support(commands::SupportArgs),
    /// Critical exponents and amplitudes of the square case r = 1.
    Critical(commands::CriticalArgs),
    /// Monte Carlo Wishart spectrum against the model density.
    Mc(commands::McArgs),
    /// Resolvent G(z) with equation and PDE residuals.
    Green(commands::GreenArgs),
    /// Density of signed singular values.
    Chiral(commands::ChiralArgs),
}

impl Command {
    fn output(&self) -> &OutputSpec {
        match self {
            Command::Density(a) => &a.out,
            Command::Support(a) => &a.out,
            Command::Critical(a) => &a.out,
            Command::Mc(a) => &a.out,
            Command::Green(a) => &a.out,
            Command::Chiral(a) => &a.out,
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MP3_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            Failure::Usage(format!("MP3_THREADS={raw:?} is not a positive integer"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let (body, code) = match &cli.command {
        Command::Density(a) => commands::density(a)?,
        Command::Support(a) => commands::support(a)?,
        Command::Critical(a) => commands::critical(a)?,
        Command::Mc(a) => commands::mc(a)?,
        Command::Green(a) => commands::green(a)?,
        Command::Chiral(a) => commands::chiral(a)?,
    };
    cli.command.output().write(&body).map_err(Failure::Io)?;
    Ok(code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
