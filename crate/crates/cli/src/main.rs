//! `algebrarium`: a file-mediated pipeline over the core library.
//! Subcommands chain through JSONL datasets and run directories:
//!
//! ```text
//! generate → decompose → simulate → grade → analyze → report
//! ```
//!
//! Every flag is mirrored by an `ALGEBRARIUM_*` environment variable.
//! Exit codes: 0 ok, 2 config, 3 I/O, 4 data format, 5 not enough data.

mod commands;
mod config;
mod errors;
mod manifest;

use clap::{Parser, Subcommand};

use commands::{analyze, decompose, generate, grade, report, simulate};
use errors::CliError;

#[derive(Parser)]
#[command(name = "algebrarium", version, about = "Synthetic algebra reasoning workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a task dataset with decomposition chains.
    Generate(generate::GenerateArgs),
    /// Rewrite tasks into per-step chains.
    Decompose(decompose::DecomposeArgs),
    /// Sample responses from a configurable stochastic agent.
    Simulate(simulate::SimulateArgs),
    /// Grade responses against ground truth into estimates.
    Grade(grade::GradeArgs),
    /// Compute curves, censuses, fits, and comparisons into a report directory.
    Analyze(analyze::AnalyzeArgs),
    /// Summarize a report directory as plain text.
    Report(report::ReportArgs),
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Decompose(args) => decompose::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Grade(args) => grade::run(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Report(args) => report::run(args),
    }
}

fn main() {
    if let Err(err) = dispatch(Cli::parse()) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
