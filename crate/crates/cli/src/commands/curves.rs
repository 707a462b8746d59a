//! `cone curves`: the data behind the activation/derivative comparison
//! plots — one CSV row per sample point, columns g and g' per kind.

use super::{kind_key, parse_kinds};
use crate::cli_error::{CliError, CliResult};
use crate::config::ConfigFile;
use clap::Args;
use std::path::PathBuf;

#[derive(Args)]
pub struct CurvesArgs {
    /// Comma-separated activation names (e.g. cone,parabolic-cone,relu)
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<String>>,
    #[arg(long, allow_negative_numbers = true)]
    pub zmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub zmax: Option<f64>,
    /// Number of sample points including both endpoints
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: CurvesArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let zmin = config.resolve(args.zmin, "zmin", -4.0)?;
    let zmax = config.resolve(args.zmax, "zmax", 4.0)?;
    let steps = config.resolve(args.steps, "steps", 161)?;
    let kind_names = match args.kinds {
        Some(k) => k,
        None => config
            .get_str("kinds")
            .unwrap_or("cone,parabolic-cone,relu")
            .split(',')
            .map(str::to_string)
            .collect(),
    };
    if zmin.is_nan() || zmax.is_nan() || zmin >= zmax {
        return Err(CliError::usage(format!("need zmin < zmax, got {zmin} and {zmax}")));
    }
    if steps < 2 {
        return Err(CliError::usage(format!("need at least 2 steps, got {steps}")));
    }
    let kinds = parse_kinds(&kind_names)?;
    if kinds.is_empty() {
        return Err(CliError::usage("no activation kinds requested"));
    }

    let mut csv = String::from("z");
    for kind in &kinds {
        let key = kind_key(kind);
        csv.push_str(&format!(",{key},{key}_deriv"));
    }
    csv.push('\n');
    for i in 0..steps {
        let z = if i == steps - 1 {
            zmax
        } else {
            zmin + (i as f64) * (zmax - zmin) / ((steps - 1) as f64)
        };
        csv.push_str(&z.to_string());
        for kind in &kinds {
            csv.push_str(&format!(",{},{}", kind.forward(z)?, kind.derivative(z)?));
        }
        csv.push('\n');
    }

    match args.out {
        Some(path) => std::fs::write(&path, csv)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}
