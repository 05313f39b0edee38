//! `cssdpp`: generate benchmark matrices, run column selectors, and
//! evaluate error bounds and excess risks.

mod algo;
mod commands;
mod dataset;

use anyhow::Result;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cssdpp",
    about = "Column subset selection with determinantal point processes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a matrix with prescribed spectrum and leverage profile
    Gen(commands::gen::GenArgs),
    /// Run one selector once and report the selection and residuals
    Select(commands::select::SelectArgs),
    /// Repeated selections per algorithm, with optional best-of boosting
    Bench(commands::bench::BenchArgs),
    /// Evaluate every applicable error bound, with exact or Monte-Carlo
    /// expectations for comparison
    Bounds(commands::bounds::BoundsArgs),
    /// Monte-Carlo excess risk of sketched regression, with bounds
    Risk(commands::risk::RiskArgs),
}

fn main() -> Result<()> {
    configure_threads();
    match Cli::parse().command {
        Command::Gen(args) => commands::gen::run(args),
        Command::Select(args) => commands::select::run(args),
        Command::Bench(args) => commands::bench::run(args),
        Command::Bounds(args) => commands::bounds::run(args),
        Command::Risk(args) => commands::risk::run(args),
    }
}

/// `CSSDPP_THREADS` caps the rayon pool; results never depend on it.
fn configure_threads() {
    if let Ok(v) = std::env::var("CSSDPP_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}
