pub mod annulus;
pub mod bench;
pub mod boundary;
pub mod curves;
pub mod dataset_args;
pub mod eval;
pub mod train;
pub mod xor;

use crate::cli_error::{CliError, CliResult};
use cone_core::experiments::{self, ExperimentConfig, TrialStats};
use cone_core::ActivationKind;
use std::path::Path;

/// Machine-friendly key for an activation, carrying the exponent for the
/// parameterized cone so distinct shapes stay distinct in CSV columns.
pub fn kind_key(kind: &ActivationKind) -> String {
    match kind {
        ActivationKind::ParameterizedCone { beta } => format!("parameterized-cone:{beta}"),
        _ => kind.name().to_string(),
    }
}

/// Parses one activation name from operator input.
pub fn parse_kind(name: &str) -> CliResult<ActivationKind> {
    ActivationKind::from_name(name).map_err(CliError::usage)
}

/// Parses a comma-separated activation list.
pub fn parse_kinds(names: &[String]) -> CliResult<Vec<ActivationKind>> {
    names.iter().map(|n| parse_kind(n)).collect()
}

/// Runs a single-activation experiment, prints its stats table, and writes
/// the summary/trials/curves CSVs into the config's output directory.
pub fn run_and_report(cfg: &ExperimentConfig, kind: ActivationKind) -> CliResult<TrialStats> {
    let stats = experiments::run_trials(cfg)?;
    let entries = [(kind.label(), &stats)];
    print!("{}", experiments::format_summary_table(&entries));
    let key = kind_key(&kind);
    let csv_entries = [(key.as_str(), &stats)];
    let out_dir = cfg.out_dir.clone().unwrap_or_else(|| Path::new(".").to_path_buf());
    let written = experiments::write_reports(&out_dir, &cfg.name, &csv_entries, cfg.base_seed)?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(stats)
}
