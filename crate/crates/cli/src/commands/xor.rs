//! `cone xor`: seeded trials of a single hidden neuron on the XOR points.

use super::{parse_kind, run_and_report};
use crate::cli_error::CliResult;
use crate::config::{resolve_out_dir, ConfigFile};
use clap::Args;
use cone_core::experiments::{xor_config, DEFAULT_TRIALS, TOY_LR, XOR_EPOCHS};
use std::path::PathBuf;

#[derive(Args)]
pub struct XorArgs {
    /// Activation of the single hidden neuron
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for the summary/trials/curves CSVs
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: XorArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let kind_name = match args.kind {
        Some(k) => k,
        None => config.get_str("kind").unwrap_or("cone").to_string(),
    };
    let kind = parse_kind(&kind_name)?;
    let trials = config.resolve(args.trials, "trials", DEFAULT_TRIALS)?;
    let epochs = config.resolve(args.epochs, "epochs", XOR_EPOCHS)?;
    let lr = config.resolve(args.lr, "lr", TOY_LR)?;
    let seed = config.resolve(args.seed, "seed", 0)?;
    let out_dir = resolve_out_dir(args.out_dir, &config);

    let mut cfg = xor_config(kind, trials, epochs, lr, seed);
    cfg.out_dir = Some(out_dir);
    run_and_report(&cfg, kind)?;
    Ok(())
}
