//! Shared dataset selection flags for `train` and `eval`.

use crate::cli_error::{CliError, CliResult};
use crate::config::ConfigFile;
use clap::{Args, ValueEnum};
use cone_core::data::{Dataset, ANNULUS_INNER_RADIUS, ANNULUS_RING_RADII};
use cone_core::experiments::{materialize_datasets, DatasetSpec};
use std::path::PathBuf;

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum DatasetChoice {
    Xor,
    Annulus,
    Csv,
    Cifar10,
}

#[derive(Args)]
pub struct DatasetArgs {
    /// Data source
    #[arg(long, value_enum)]
    pub dataset: DatasetChoice,
    /// CSV file (csv) or CIFAR-10 binary directory (cifar10)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Label column of a CSV dataset (header name or zero-based index)
    #[arg(long)]
    pub label_col: Option<String>,
    /// Train fraction of a CSV split
    #[arg(long)]
    pub split: Option<f64>,
    /// Standardize CSV features with train statistics
    #[arg(long)]
    pub normalize: bool,
    /// Points per class (annulus)
    #[arg(long)]
    pub n_per_class: Option<usize>,
    #[arg(long)]
    pub inner_radius: Option<f64>,
    #[arg(long)]
    pub ring_lo: Option<f64>,
    #[arg(long)]
    pub ring_hi: Option<f64>,
    /// Per-class cap on CIFAR-10 training records
    #[arg(long)]
    pub train_per_class: Option<usize>,
    /// Per-class cap on CIFAR-10 test records
    #[arg(long)]
    pub test_per_class: Option<usize>,
}

impl DatasetArgs {
    pub fn to_spec(&self, config: &ConfigFile) -> CliResult<DatasetSpec> {
        let data_path = |what: &str| -> CliResult<PathBuf> {
            self.data
                .clone()
                .or_else(|| config.get_str("data").map(PathBuf::from))
                .ok_or_else(|| CliError::usage(format!("--data is required for {what}")))
        };
        Ok(match self.dataset {
            DatasetChoice::Xor => DatasetSpec::Xor,
            DatasetChoice::Annulus => DatasetSpec::Annulus {
                n_per_class: config.resolve(self.n_per_class, "n_per_class", 500)?,
                inner_radius: config.resolve(self.inner_radius, "inner_radius", ANNULUS_INNER_RADIUS)?,
                ring_radii: (
                    config.resolve(self.ring_lo, "ring_lo", ANNULUS_RING_RADII.0)?,
                    config.resolve(self.ring_hi, "ring_hi", ANNULUS_RING_RADII.1)?,
                ),
            },
            DatasetChoice::Csv => DatasetSpec::Csv {
                path: data_path("csv datasets")?,
                label_column: self
                    .label_col
                    .clone()
                    .or_else(|| config.get_str("label_col").map(String::from))
                    .unwrap_or_else(|| "label".to_string()),
                train_fraction: config.resolve(self.split, "split", 0.8)?,
                standardize: self.normalize,
            },
            DatasetChoice::Cifar10 => DatasetSpec::Cifar10Subset {
                dir: data_path("cifar10 datasets")?,
                train_per_class: config.resolve_opt(self.train_per_class, "train_per_class")?,
                test_per_class: config.resolve_opt(self.test_per_class, "test_per_class")?,
            },
        })
    }

    pub fn materialize(&self, config: &ConfigFile, seed: u64) -> CliResult<(Dataset, Dataset)> {
        let spec = self.to_spec(config)?;
        Ok(materialize_datasets(&spec, seed)?)
    }
}
