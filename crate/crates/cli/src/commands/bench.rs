//! `cone bench`: the per-activation accuracy table on a CIFAR-10 subset,
//! in the five-statistic format of the benchmark tables.

use super::{kind_key, parse_kinds};
use crate::cli_error::{CliError, CliResult};
use crate::config::{resolve_out_dir, ConfigFile};
use clap::Args;
use cone_core::experiments::{
    self, SubsetBenchConfig, BENCH_BATCH, BENCH_LR, DEFAULT_EPOCHS, DEFAULT_TRIALS,
};
use std::path::PathBuf;

#[derive(Args)]
pub struct BenchArgs {
    /// Directory holding data_batch_1..5.bin and test_batch.bin
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Comma-separated activations to benchmark
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<String>>,
    /// Hidden-layer width
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub train_per_class: Option<usize>,
    #[arg(long)]
    pub test_per_class: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for the summary/trials/curves CSVs
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: BenchArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let data_dir = args
        .data
        .or_else(|| config.get_str("data").map(PathBuf::from))
        .ok_or_else(|| CliError::usage("--data <dir> is required (CIFAR-10 binary directory)"))?;
    let kind_names = match args.kinds {
        Some(k) => k,
        None => config
            .get_str("kinds")
            .unwrap_or("relu,leaky-relu,cone,parabolic-cone")
            .split(',')
            .map(str::to_string)
            .collect(),
    };
    let kinds = parse_kinds(&kind_names)?;
    let cfg = SubsetBenchConfig {
        data_dir,
        kinds,
        width: config.resolve(args.width, "width", 10)?,
        train_per_class: config.resolve(args.train_per_class, "train_per_class", 500)?,
        test_per_class: config.resolve(args.test_per_class, "test_per_class", 100)?,
        epochs: config.resolve(args.epochs, "epochs", DEFAULT_EPOCHS)?,
        lr: config.resolve(args.lr, "lr", BENCH_LR)?,
        batch_size: config.resolve(args.batch, "batch", BENCH_BATCH)?,
        trials: config.resolve(args.trials, "trials", DEFAULT_TRIALS)?,
        base_seed: config.resolve(args.seed, "seed", 0)?,
    };
    if cfg.batch_size == 0 {
        return Err(CliError::usage("batch size must be positive"));
    }
    let out_dir = resolve_out_dir(args.out_dir, &config);

    let rows = experiments::subset_benchmark(&cfg)?;

    let labels: Vec<(String, &cone_core::experiments::TrialStats)> = rows
        .iter()
        .map(|r| (r.kind.label().to_string(), &r.stats))
        .collect();
    let table_entries: Vec<(&str, &cone_core::experiments::TrialStats)> =
        labels.iter().map(|(l, s)| (l.as_str(), *s)).collect();
    print!("{}", experiments::format_summary_table(&table_entries));

    let keys: Vec<String> = rows.iter().map(|r| kind_key(&r.kind)).collect();
    let csv_entries: Vec<(&str, &cone_core::experiments::TrialStats)> = keys
        .iter()
        .zip(&rows)
        .map(|(k, r)| (k.as_str(), &r.stats))
        .collect();
    let name = format!("bench-w{}", cfg.width);
    let written = experiments::write_reports(&out_dir, &name, &csv_entries, cfg.base_seed)?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
