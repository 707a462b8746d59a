//! `cone train`: train one model on a dataset and save it.

use super::dataset_args::DatasetArgs;
use super::parse_kinds;
use crate::cli_error::{CliError, CliResult};
use crate::config::ConfigFile;
use clap::Args;
use cone_core::experiments::{evaluate_accuracy, train_network, ArchSpec, TrainSettings, TOY_LR};
use cone_core::LayerSpec;
use std::path::PathBuf;

#[derive(Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Hidden widths, comma-separated (e.g. 32,16)
    #[arg(long)]
    pub arch: Option<String>,
    /// Hidden activations: one name, or one per hidden layer
    #[arg(long, value_delimiter = ',')]
    pub kinds: Option<Vec<String>>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Minibatch size; trains full-batch when omitted
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write the trained model
    #[arg(long)]
    pub out: PathBuf,
    /// key=value config file (flags take precedence)
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn parse_arch(
    widths_raw: &str,
    kind_names: &[String],
) -> CliResult<ArchSpec> {
    let widths: Vec<usize> = widths_raw
        .split(',')
        .map(|w| {
            w.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("width '{w}' is not a positive integer")))
        })
        .collect::<CliResult<_>>()?;
    if widths.is_empty() || widths.contains(&0) {
        return Err(CliError::usage("hidden widths must be positive"));
    }
    let kinds = parse_kinds(kind_names)?;
    let kinds = match kinds.len() {
        1 => vec![kinds[0]; widths.len()],
        n if n == widths.len() => kinds,
        n => {
            return Err(CliError::usage(format!(
                "got {n} activations for {} hidden layers; pass one, or one per layer",
                widths.len()
            )))
        }
    };
    Ok(ArchSpec {
        hidden: widths
            .into_iter()
            .zip(kinds)
            .map(|(width, kind)| LayerSpec { width, kind })
            .collect(),
    })
}

pub fn run(args: TrainArgs) -> CliResult<()> {
    let config = ConfigFile::load(args.config.as_deref())?;
    let widths_raw = match args.arch {
        Some(a) => a,
        None => config.get_str("arch").unwrap_or("8").to_string(),
    };
    let kind_names: Vec<String> = match args.kinds {
        Some(k) => k,
        None => config
            .get_str("kinds")
            .unwrap_or("cone")
            .split(',')
            .map(str::to_string)
            .collect(),
    };
    let arch = parse_arch(&widths_raw, &kind_names)?;
    let epochs = config.resolve(args.epochs, "epochs", 30)?;
    let lr = config.resolve(args.lr, "lr", TOY_LR)?;
    let batch = config.resolve_opt(args.batch, "batch")?;
    if batch == Some(0) || epochs == 0 {
        return Err(CliError::usage("epochs and batch size must be positive"));
    }
    let seed = config.resolve(args.seed, "seed", 0)?;

    let (train, test) = args.dataset.materialize(&config, seed)?;
    println!(
        "training on {} ({} train / {} test samples, {} features, {} classes)",
        train.name(),
        train.n_samples(),
        test.n_samples(),
        train.n_features(),
        train.class_count()
    );
    println!(
        "class histogram: train {:?} test {:?}",
        train.label_histogram(),
        test.label_histogram()
    );
    let settings = TrainSettings { epochs, lr, batch_size: batch };
    let (net, curve) = train_network(&train, &test, &arch, &settings, seed)?;
    let last = curve.last().expect("epochs >= 1");
    println!(
        "epoch {}: train_loss {:.6} train_acc {:.4} test_acc {:.4}",
        last.epoch, last.train_loss, last.train_acc, last.test_acc
    );

    std::fs::write(&args.out, net.save())
        .map_err(|e| CliError::runtime(format!("{}: {e}", args.out.display())))?;
    println!("wrote {}", args.out.display());

    let final_train = evaluate_accuracy(&net, &train)?;
    let final_test = evaluate_accuracy(&net, &test)?;
    println!("final: train_acc {final_train:.4} test_acc {final_test:.4}");
    Ok(())
}
