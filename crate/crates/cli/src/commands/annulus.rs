//! `cone annulus`: seeded trials on the disk-vs-ring dataset.

use super::{parse_kind, run_and_report};
use crate::cli_error::{CliError, CliResult};
use crate::config::{resolve_out_dir, ConfigFile};
use clap::Args;
use cone_core::data::{ANNULUS_INNER_RADIUS, ANNULUS_RING_RADII};
use cone_core::experiments::{annulus_config, ANNULUS_EPOCHS, DEFAULT_TRIALS, TOY_LR};
use cone_core::experiments::DatasetSpec;
use std::path::PathBuf;

#[derive(Args)]
pub struct AnnulusArgs {
    /// Hidden-layer activation
    #[arg(long)]
    pub kind: Option<String>,
    /// Hidden units
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Training points per class (the test draw uses a quarter of this)
    #[arg(long)]
    pub n_per_class: Option<usize>,
    /// Radius of the inner disk (class 0)
    #[arg(long)]
    pub inner_radius: Option<f64>,
    /// Inner radius of the ring (class 1)
    #[arg(long)]
    pub ring_lo: Option<f64>,
    /// Outer radius of the ring (class 1)
    #[arg(long)]
    pub ring_hi: Option<f64>,
    /// Directory for the summary/trials/curves CSVs
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: AnnulusArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let kind_name = match args.kind {
        Some(k) => k,
        None => config.get_str("kind").unwrap_or("cone").to_string(),
    };
    let kind = parse_kind(&kind_name)?;
    let hidden = config.resolve(args.hidden, "hidden", 2)?;
    let trials = config.resolve(args.trials, "trials", DEFAULT_TRIALS)?;
    let epochs = config.resolve(args.epochs, "epochs", ANNULUS_EPOCHS)?;
    let lr = config.resolve(args.lr, "lr", TOY_LR)?;
    let seed = config.resolve(args.seed, "seed", 0)?;
    let n_per_class = config.resolve(args.n_per_class, "n_per_class", 500)?;
    let inner_radius = config.resolve(args.inner_radius, "inner_radius", ANNULUS_INNER_RADIUS)?;
    let ring_lo = config.resolve(args.ring_lo, "ring_lo", ANNULUS_RING_RADII.0)?;
    let ring_hi = config.resolve(args.ring_hi, "ring_hi", ANNULUS_RING_RADII.1)?;
    if hidden == 0 {
        return Err(CliError::usage("need at least 1 hidden unit"));
    }
    let out_dir = resolve_out_dir(args.out_dir, &config);

    let mut cfg = annulus_config(kind, hidden, trials, epochs, lr, seed);
    cfg.dataset = DatasetSpec::Annulus {
        n_per_class,
        inner_radius,
        ring_radii: (ring_lo, ring_hi),
    };
    cfg.out_dir = Some(out_dir);
    run_and_report(&cfg, kind)?;
    Ok(())
}
