//! `cone boundary`: rasters the decision regions of an analytic neuron
//! (`--analytic kind:w1,w2:b`) or a saved 2-input model over a rectangle.
//!
//! Neuron rasters encode negative=0, positive=1, boundary=2; model rasters
//! carry argmax class indices. PGM output maps cell k of C levels to gray
//! floor(255*k/(C-1)).

use super::parse_kind;
use crate::cli_error::{CliError, CliResult};
use crate::config::ConfigFile;
use crate::pgm::{render_grid_csv, render_pgm};
use clap::{Args, ValueEnum};
use cone_core::geometry::{self, DEFAULT_BOUNDARY_TOL};
use cone_core::{Bounds, Network, NeuronGeometry, RasterGrid};
use std::path::PathBuf;

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum GridFormat {
    Csv,
    Pgm,
}

#[derive(Args)]
pub struct BoundaryArgs {
    /// Saved model file (2-input networks only)
    #[arg(long, conflicts_with = "analytic")]
    pub model: Option<PathBuf>,
    /// Analytic neuron spec `kind:w1,w2:bias`, e.g. cone:1,0:0
    #[arg(long)]
    pub analytic: Option<String>,
    /// Rectangle as xmin,xmax,ymin,ymax
    #[arg(long, allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Samples per axis (endpoints included)
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Output encoding; inferred from the --out extension when omitted
    #[arg(long, value_enum)]
    pub format: Option<GridFormat>,
    /// Output file
    #[arg(long)]
    pub out: PathBuf,
    /// Width of the zero band labeled Boundary (analytic rasters)
    #[arg(long)]
    pub tol: Option<f64>,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_bounds(raw: &str) -> CliResult<Bounds> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::usage(format!(
            "--bounds wants xmin,xmax,ymin,ymax; got '{raw}'"
        )));
    }
    let mut vals = [0.0; 4];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("bound '{part}' is not a number")))?;
    }
    Bounds::new(vals[0], vals[1], vals[2], vals[3]).map_err(CliError::usage)
}

/// `kind:w1,w2:bias`; the kind may itself carry a `:beta` suffix, so the
/// spec is split from the right.
fn parse_analytic(raw: &str) -> CliResult<NeuronGeometry> {
    let mut parts = raw.rsplitn(3, ':');
    let bias_part = parts.next();
    let weights_part = parts.next();
    let kind_part = parts.next();
    let (Some(bias_part), Some(weights_part), Some(kind_part)) = (bias_part, weights_part, kind_part)
    else {
        return Err(CliError::usage(format!(
            "--analytic wants kind:w1,w2:bias; got '{raw}'"
        )));
    };
    let kind = parse_kind(kind_part)?;
    let weights: Vec<f64> = weights_part
        .split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("weight '{w}' is not a number")))
        })
        .collect::<CliResult<_>>()?;
    if weights.len() != 2 {
        return Err(CliError::usage(format!(
            "analytic rasters are 2-d; got {} weights",
            weights.len()
        )));
    }
    let bias: f64 = bias_part
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bias '{bias_part}' is not a number")))?;
    NeuronGeometry::new(weights, bias, kind).map_err(CliError::usage)
}

pub fn run(args: BoundaryArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let bounds_raw = match args.bounds {
        Some(b) => b,
        None => config.get_str("bounds").unwrap_or("-3,3,-3,3").to_string(),
    };
    let bounds = parse_bounds(&bounds_raw)?;
    let resolution = config.resolve(args.resolution, "resolution", 101)?;
    if resolution < 2 {
        return Err(CliError::usage(format!("resolution must be at least 2, got {resolution}")));
    }
    let tol = config.resolve(args.tol, "tol", DEFAULT_BOUNDARY_TOL)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::usage(format!("tol must be nonnegative, got {tol}")));
    }
    let format = match args.format {
        Some(f) => f,
        None => match args.out.extension().and_then(|e| e.to_str()) {
            Some("csv") => GridFormat::Csv,
            Some("pgm") => GridFormat::Pgm,
            _ => {
                return Err(CliError::usage(
                    "cannot infer format from --out extension; pass --format csv|pgm",
                ))
            }
        },
    };

    let (grid, levels): (RasterGrid, usize) = match (&args.model, &args.analytic) {
        (Some(path), None) => {
            let bytes = std::fs::read(path)
                .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
            let net = Network::load(&bytes)?;
            let classes = net.class_count();
            (geometry::raster_network(&net, bounds, resolution)?, classes)
        }
        (None, Some(spec)) => {
            let geom = parse_analytic(spec)?;
            (geometry::raster_neuron(&geom, bounds, resolution, tol)?, 3)
        }
        _ => {
            return Err(CliError::usage(
                "exactly one of --model and --analytic is required",
            ))
        }
    };

    let bytes = match format {
        GridFormat::Csv => render_grid_csv(&grid).into_bytes(),
        GridFormat::Pgm => render_pgm(&grid, levels),
    };
    std::fs::write(&args.out, bytes)
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.out.display())))?;
    println!("wrote {}", args.out.display());
    Ok(())
}
