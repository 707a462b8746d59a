//! `cone` — experiment CLI for the cone activation-function library.
//!
//! Exit codes: 0 success, 1 runtime/IO failure, 2 usage error.

mod cli_error;
mod commands;
mod config;
mod pgm;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cone",
    version,
    about = "Cone-activation networks: curve data, decision-region rasters, and seeded training experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit activation and first-derivative curves as CSV
    Curves(commands::curves::CurvesArgs),
    /// Train a single hidden neuron on the four XOR points, over seeded trials
    Xor(commands::xor::XorArgs),
    /// Train a small net on the disk-vs-ring dataset, over seeded trials
    Annulus(commands::annulus::AnnulusArgs),
    /// Per-activation benchmark on a CIFAR-10 subset
    Bench(commands::bench::BenchArgs),
    /// Raster a neuron's or model's decision regions to CSV or PGM
    Boundary(commands::boundary::BoundaryArgs),
    /// Train one model on a dataset and save it
    Train(commands::train::TrainArgs),
    /// Load a saved model and report its accuracy on a dataset
    Eval(commands::eval::EvalArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => cli_error::EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Curves(args) => commands::curves::run(args),
        Command::Xor(args) => commands::xor::run(args),
        Command::Annulus(args) => commands::annulus::run(args),
        Command::Bench(args) => commands::bench::run(args),
        Command::Boundary(args) => commands::boundary::run(args),
        Command::Train(args) => commands::train::run(args),
        Command::Eval(args) => commands::eval::run(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}
