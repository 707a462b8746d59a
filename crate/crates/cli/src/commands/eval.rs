//! `cone eval`: accuracy of a saved model on a dataset.

use super::dataset_args::DatasetArgs;
use crate::cli_error::{CliError, CliResult};
use crate::config::ConfigFile;
use clap::Args;
use cone_core::experiments::evaluate_accuracy;
use cone_core::Network;
use std::path::PathBuf;

#[derive(Args)]
pub struct EvalArgs {
    /// Saved model file
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Seed for dataset materialization (synthetic data and CSV splits)
    #[arg(long)]
    pub seed: Option<u64>,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: EvalArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let seed = config.resolve(args.seed, "seed", 0)?;
    let bytes = std::fs::read(&args.model)
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.model.display())))?;
    let net = Network::load(&bytes)?;
    let (train, test) = args.dataset.materialize(&config, seed)?;
    if train.n_features() != net.input_dim() {
        return Err(CliError::runtime(format!(
            "model expects {} features but {} provides {}",
            net.input_dim(),
            train.name(),
            train.n_features()
        )));
    }
    let train_acc = evaluate_accuracy(&net, &train)?;
    let test_acc = evaluate_accuracy(&net, &test)?;
    println!("train_acc {train_acc:.4} test_acc {test_acc:.4}");
    Ok(())
}
