//! Seeded multi-trial training runs and the five-statistic accuracy tables.
//!
//! Trial k of an experiment draws its weight initialization and shuffle
//! order from seed `base_seed + k`, so every number an experiment emits is a
//! pure function of its config. Trials run concurrently but are aggregated
//! in index order, which keeps results independent of scheduling.

use crate::activations::ActivationKind;
use crate::data::{self, Dataset};
use crate::error::{Error, Result};
use crate::network::{InitOptions, LayerSpec, Network};
use crate::optim::{AdamConfig, AdamState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};

/// Offset separating dataset-generation seeds from trial seeds, which are
/// `base_seed + k` by contract.
const DATA_SEED_OFFSET: u64 = 0x5EED_DA7A;

/// Default learning rate for the XOR and annulus toy experiments. The
/// benchmark rate of 1e-4 cannot move weights the ~1 unit these problems
/// need within their epoch budgets.
pub const TOY_LR: f64 = 1e-2;
/// Benchmark learning rate.
pub const BENCH_LR: f64 = 1e-4;
/// Benchmark minibatch size; XOR and annulus train full-batch.
pub const BENCH_BATCH: usize = 128;
pub const DEFAULT_EPOCHS: usize = 30;
pub const DEFAULT_TRIALS: usize = 5;
pub const XOR_EPOCHS: usize = 5000;
pub const ANNULUS_EPOCHS: usize = 2500;

/// Hidden-layer stack; input width and class count come from the dataset.
#[derive(Debug, Clone)]
pub struct ArchSpec {
    pub hidden: Vec<LayerSpec>,
}

/// Optimization schedule shared by every trial of an experiment.
#[derive(Debug, Clone, Copy)]
pub struct TrainSettings {
    pub epochs: usize,
    pub lr: f64,
    /// `None` trains full-batch.
    pub batch_size: Option<usize>,
}

/// Where an experiment's data comes from.
#[derive(Debug, Clone)]
pub enum DatasetSpec {
    /// The four XOR points; train and test coincide.
    Xor,
    /// Synthetic disk-vs-ring data; the test split is an independent draw
    /// with a quarter of the training points per class.
    Annulus { n_per_class: usize, inner_radius: f64, ring_radii: (f64, f64) },
    /// Subset of the canonical CIFAR-10 binary directory; `None` caps load
    /// everything.
    Cifar10Subset {
        dir: PathBuf,
        train_per_class: Option<usize>,
        test_per_class: Option<usize>,
    },
    /// Numeric CSV split into train/test; optional standardization with
    /// train statistics.
    Csv { path: PathBuf, label_column: String, train_fraction: f64, standardize: bool },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub dataset: DatasetSpec,
    pub arch: ArchSpec,
    pub epochs: usize,
    pub lr: f64,
    /// `None` trains full-batch.
    pub batch_size: Option<usize>,
    pub trials: usize,
    pub base_seed: u64,
    /// Directory for CSV reports; `None` keeps the run in memory only.
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trial count must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.batch_size == Some(0) {
            return Err(Error::InvalidConfig("batch size must be positive".into()));
        }
        if self.arch.hidden.iter().any(|l| l.width == 0) {
            return Err(Error::InvalidConfig("layer widths must be positive".into()));
        }
        AdamConfig::with_lr(self.lr).validate()
    }
}

/// One epoch's worth of training-curve data.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
}

/// Aggregated outcome of a seeded experiment. Statistics cover the
/// final-epoch test accuracy of converged trials; diverged trials are
/// excluded and flagged (`None` in `per_trial`). The standard deviation uses
/// the population divisor N; the median of an even count is the midpoint
/// average.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub best: f64,
    pub worst: f64,
    /// Final test accuracy per trial, `None` when the trial diverged.
    pub per_trial: Vec<Option<f64>>,
    /// Per-epoch curves per trial; empty for diverged trials.
    pub curves: Vec<Vec<EpochRecord>>,
}

impl TrialStats {
    pub fn from_trials(per_trial: Vec<Option<f64>>, curves: Vec<Vec<EpochRecord>>) -> Result<Self> {
        let converged: Vec<f64> = per_trial.iter().flatten().copied().collect();
        if converged.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "all {} trials diverged; no statistics to report",
                per_trial.len()
            )));
        }
        let n = converged.len() as f64;
        let mean = converged.iter().sum::<f64>() / n;
        let mut sorted = converged.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("accuracies are finite"));
        let median = if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
        };
        let std_dev =
            (converged.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n).sqrt();
        Ok(Self {
            mean,
            median,
            std_dev,
            best: *sorted.last().expect("nonempty"),
            worst: sorted[0],
            per_trial,
            curves,
        })
    }

    pub fn converged_count(&self) -> usize {
        self.per_trial.iter().flatten().count()
    }

    pub fn failed_trials(&self) -> Vec<usize> {
        self.per_trial
            .iter()
            .enumerate()
            .filter_map(|(k, a)| a.is_none().then_some(k))
            .collect()
    }
}

struct TrialRun {
    final_test_acc: f64,
    curve: Vec<EpochRecord>,
}

/// Fraction of samples classified correctly, evaluated in bounded chunks.
pub fn evaluate_accuracy(net: &Network, ds: &Dataset) -> Result<f64> {
    let n = ds.n_samples();
    let mut correct = 0usize;
    let chunk = 512;
    let mut start = 0;
    while start < n {
        let end = (start + chunk).min(n);
        let idx: Vec<usize> = (start..end).collect();
        let x = ds.features().columns_subset(&idx);
        let got = net.predict_classes(&x)?;
        correct += got
            .iter()
            .zip(&ds.labels()[start..end])
            .filter(|(a, b)| a == b)
            .count();
        start = end;
    }
    Ok(correct as f64 / n as f64)
}

/// Trains a fresh network for `epochs` under Adam, recording the training
/// curve every epoch. Initialization and shuffling both draw from `seed`.
/// Returns the trained network alongside the curve.
pub fn train_network(
    train: &Dataset,
    test: &Dataset,
    arch: &ArchSpec,
    settings: &TrainSettings,
    seed: u64,
) -> Result<(Network, Vec<EpochRecord>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Network::init(
        train.n_features(),
        &arch.hidden,
        train.class_count(),
        &mut rng,
        InitOptions::default(),
    )?;
    let mut opt = AdamState::new(&net, AdamConfig::with_lr(settings.lr))?;
    let n = train.n_samples();
    let batch = settings.batch_size.unwrap_or(n).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    let mut curve = Vec::with_capacity(settings.epochs);
    for epoch in 1..=settings.epochs {
        if batch < n {
            // Fisher-Yates reshuffle per epoch.
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
        }
        let mut loss_sum = 0.0;
        let mut batches = 0usize;
        for chunk in order.chunks(batch) {
            let x = train.features().columns_subset(chunk);
            let labels: Vec<usize> = chunk.iter().map(|&i| train.labels()[i]).collect();
            let y = crate::network::one_hot(&labels, train.class_count())?;
            let (loss, grads) = net.loss_and_grads(&x, &y)?;
            if !loss.is_finite() {
                let layer = grads
                    .layers
                    .iter()
                    .position(|g| !g.weights.is_finite() || !g.bias.is_finite())
                    .unwrap_or(0);
                return Err(Error::Diverged { layer });
            }
            opt.step(&mut net, &grads)?;
            loss_sum += loss;
            batches += 1;
        }
        curve.push(EpochRecord {
            epoch,
            train_loss: loss_sum / batches as f64,
            train_acc: evaluate_accuracy(&net, train)?,
            test_acc: evaluate_accuracy(&net, test)?,
        });
    }
    Ok((net, curve))
}

fn run_single_trial(
    train: &Dataset,
    test: &Dataset,
    arch: &ArchSpec,
    settings: &TrainSettings,
    seed: u64,
) -> Result<TrialRun> {
    let (_, curve) = train_network(train, test, arch, settings, seed)?;
    Ok(TrialRun {
        final_test_acc: curve.last().expect("epochs >= 1").test_acc,
        curve,
    })
}

/// Runs `trials` seeded trials on fixed train/test data and aggregates.
/// Divergence fails the trial, not the experiment.
pub fn run_trials_on(
    train: &Dataset,
    test: &Dataset,
    arch: &ArchSpec,
    settings: &TrainSettings,
    trials: usize,
    base_seed: u64,
) -> Result<TrialStats> {
    let mut results: Vec<Option<Result<TrialRun>>> = (0..trials).map(|_| None).collect();
    let max_threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut k = 0usize;
    while k < trials {
        let wave_end = (k + max_threads).min(trials);
        std::thread::scope(|s| {
            for (offset, slot) in results[k..wave_end].iter_mut().enumerate() {
                let seed = base_seed.wrapping_add((k + offset) as u64);
                s.spawn(move || {
                    *slot = Some(run_single_trial(train, test, arch, settings, seed));
                });
            }
        });
        k = wave_end;
    }
    let mut per_trial = Vec::with_capacity(trials);
    let mut curves = Vec::with_capacity(trials);
    for result in results {
        match result.expect("every trial ran") {
            Ok(run) => {
                per_trial.push(Some(run.final_test_acc));
                curves.push(run.curve);
            }
            Err(Error::Diverged { .. }) => {
                per_trial.push(None);
                curves.push(Vec::new());
            }
            Err(other) => return Err(other),
        }
    }
    TrialStats::from_trials(per_trial, curves)
}

/// Materializes the train/test pair a config describes. Synthetic data and
/// CSV splits are seeded from the config, away from the trial-seed range.
pub fn materialize_datasets(spec: &DatasetSpec, base_seed: u64) -> Result<(Dataset, Dataset)> {
    let data_seed = base_seed.wrapping_add(DATA_SEED_OFFSET);
    match spec {
        DatasetSpec::Xor => {
            let ds = data::make_xor();
            Ok((ds.clone(), ds))
        }
        DatasetSpec::Annulus { n_per_class, inner_radius, ring_radii } => {
            let train = data::make_annulus(*n_per_class, *inner_radius, *ring_radii, data_seed)?;
            let test = data::make_annulus(
                (*n_per_class / 4).max(1),
                *inner_radius,
                *ring_radii,
                data_seed.wrapping_add(1),
            )?;
            Ok((train, test))
        }
        DatasetSpec::Cifar10Subset { dir, train_per_class, test_per_class } => {
            data::load_cifar10_split(dir, *train_per_class, *test_per_class)
        }
        DatasetSpec::Csv { path, label_column, train_fraction, standardize } => {
            let full = data::load_csv(path, label_column)?;
            let (train, test) = data::split(&full, *train_fraction, data_seed)?;
            if *standardize {
                let (train, test, _) = data::normalize(&train, &test)?;
                Ok((train, test))
            } else {
                Ok((train, test))
            }
        }
    }
}

/// The full protocol: materialize data, run seeded trials, aggregate.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialStats> {
    cfg.validate()?;
    let (train, test) = materialize_datasets(&cfg.dataset, cfg.base_seed)?;
    let settings = TrainSettings { epochs: cfg.epochs, lr: cfg.lr, batch_size: cfg.batch_size };
    run_trials_on(&train, &test, &cfg.arch, &settings, cfg.trials, cfg.base_seed)
}

/// Config for the single-hidden-neuron XOR experiment.
pub fn xor_config(kind: ActivationKind, trials: usize, epochs: usize, lr: f64, base_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: format!("xor-{}", kind.name()),
        dataset: DatasetSpec::Xor,
        arch: ArchSpec { hidden: vec![LayerSpec { width: 1, kind }] },
        epochs,
        lr,
        batch_size: None,
        trials,
        base_seed,
        out_dir: None,
    }
}

/// Trains `[2 -> 1 unit of kind -> 2-class head]` on the XOR points with
/// full-batch Adam; accuracy is over the four points.
pub fn xor_experiment(kind: ActivationKind, trials: usize, epochs: usize) -> Result<TrialStats> {
    run_trials(&xor_config(kind, trials, epochs, TOY_LR, 0))
}

/// Config for the disk-vs-ring experiment with `hidden` units of `kind`.
pub fn annulus_config(
    kind: ActivationKind,
    hidden: usize,
    trials: usize,
    epochs: usize,
    lr: f64,
    base_seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        name: format!("annulus-{}-h{hidden}", kind.name()),
        dataset: DatasetSpec::Annulus {
            n_per_class: 500,
            inner_radius: data::ANNULUS_INNER_RADIUS,
            ring_radii: data::ANNULUS_RING_RADII,
        },
        arch: ArchSpec { hidden: vec![LayerSpec { width: hidden, kind }] },
        epochs,
        lr,
        batch_size: None,
        trials,
        base_seed,
        out_dir: None,
    }
}

/// Trains `[2 -> hidden(kind) -> 2-class head]` on the annulus data.
pub fn annulus_experiment(
    kind: ActivationKind,
    hidden: usize,
    trials: usize,
    epochs: usize,
) -> Result<TrialStats> {
    run_trials(&annulus_config(kind, hidden, trials, epochs, TOY_LR, 0))
}

/// One row of a benchmark table.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub kind: ActivationKind,
    pub stats: TrialStats,
}

#[derive(Debug, Clone)]
pub struct SubsetBenchConfig {
    pub data_dir: PathBuf,
    pub kinds: Vec<ActivationKind>,
    pub width: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub epochs: usize,
    pub lr: f64,
    pub batch_size: usize,
    pub trials: usize,
    pub base_seed: u64,
}

impl Default for SubsetBenchConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("data/cifar-10-batches-bin"),
            kinds: vec![
                ActivationKind::ReLU,
                ActivationKind::LeakyReLU,
                ActivationKind::Cone,
                ActivationKind::ParabolicCone,
            ],
            width: 10,
            train_per_class: 500,
            test_per_class: 100,
            epochs: DEFAULT_EPOCHS,
            lr: BENCH_LR,
            batch_size: BENCH_BATCH,
            trials: DEFAULT_TRIALS,
            base_seed: 0,
        }
    }
}

/// Trains `[features -> width(kind) -> softmax]` per requested kind on a
/// per-class-capped CIFAR-10 subset; the data loads once and is shared.
pub fn subset_benchmark(cfg: &SubsetBenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.kinds.is_empty() {
        return Err(Error::InvalidConfig("benchmark needs at least one activation".into()));
    }
    let (train, test) = data::load_cifar10_split(
        &cfg.data_dir,
        Some(cfg.train_per_class),
        Some(cfg.test_per_class),
    )?;
    let settings = TrainSettings {
        epochs: cfg.epochs,
        lr: cfg.lr,
        batch_size: Some(cfg.batch_size),
    };
    let mut rows = Vec::with_capacity(cfg.kinds.len());
    for &kind in &cfg.kinds {
        let arch = ArchSpec { hidden: vec![LayerSpec { width: cfg.width, kind }] };
        let stats = run_trials_on(&train, &test, &arch, &settings, cfg.trials, cfg.base_seed)?;
        rows.push(BenchRow { kind, stats });
    }
    Ok(rows)
}

// --- report rendering ------------------------------------------------------
//
// CSV dialect: comma separator, '.' decimal point, header row, LF endings.
// Floats print with Rust's shortest round-trip formatting, so identical runs
// give byte-identical files.

/// Summary table, one row per entry.
pub fn render_summary_csv(entries: &[(&str, &TrialStats)]) -> String {
    let mut out = String::from(
        "activation,mean_test_accuracy,median_test_accuracy,std_dev_test_accuracy,best_test_accuracy,worst_test_accuracy,converged_trials,total_trials\n",
    );
    for (label, stats) in entries {
        out.push_str(&format!(
            "{label},{},{},{},{},{},{},{}\n",
            stats.mean,
            stats.median,
            stats.std_dev,
            stats.best,
            stats.worst,
            stats.converged_count(),
            stats.per_trial.len()
        ));
    }
    out
}

/// Per-trial accuracies with their seeds; diverged trials flag their status
/// and leave the accuracy cell empty.
pub fn render_trials_csv(entries: &[(&str, &TrialStats)], base_seed: u64) -> String {
    let mut out = String::from("activation,trial,seed,test_accuracy,status\n");
    for (label, stats) in entries {
        for (k, acc) in stats.per_trial.iter().enumerate() {
            let seed = base_seed.wrapping_add(k as u64);
            match acc {
                Some(a) => out.push_str(&format!("{label},{k},{seed},{a},ok\n")),
                None => out.push_str(&format!("{label},{k},{seed},,diverged\n")),
            }
        }
    }
    out
}

/// Training curve of one trial.
pub fn render_curves_csv(curve: &[EpochRecord]) -> String {
    let mut out = String::from("epoch,train_loss,train_acc,test_acc\n");
    for rec in curve {
        out.push_str(&format!(
            "{},{},{},{}\n",
            rec.epoch, rec.train_loss, rec.train_acc, rec.test_acc
        ));
    }
    out
}

/// Fixed-width text table in the shape of the benchmark result tables:
/// mean / median / std dev / best / worst test accuracy.
pub fn format_summary_table(entries: &[(&str, &TrialStats)]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<22} {:>10} {:>10} {:>10} {:>10} {:>10}\n",
        "Activation Function", "Mean", "Median", "Std. Dev.", "Best", "Worst"
    ));
    for (label, stats) in entries {
        out.push_str(&format!(
            "{:<22} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            label, stats.mean, stats.median, stats.std_dev, stats.best, stats.worst
        ));
        let failed = stats.failed_trials();
        if !failed.is_empty() {
            out.push_str(&format!("  [diverged trials: {failed:?}]"));
        }
        out.push('\n');
    }
    out
}

/// Writes the summary, per-trial, and per-curve CSVs for an experiment into
/// `dir`, returning the created paths.
pub fn write_reports(
    dir: &Path,
    experiment: &str,
    entries: &[(&str, &TrialStats)],
    base_seed: u64,
) -> Result<Vec<PathBuf>> {
    let io = |path: &Path| {
        let p = path.to_path_buf();
        move |source: std::io::Error| Error::Io { path: p, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();

    let summary = dir.join(format!("{experiment}_summary.csv"));
    std::fs::write(&summary, render_summary_csv(entries)).map_err(io(&summary))?;
    written.push(summary);

    let trials = dir.join(format!("{experiment}_trials.csv"));
    std::fs::write(&trials, render_trials_csv(entries, base_seed)).map_err(io(&trials))?;
    written.push(trials);

    for (label, stats) in entries {
        // Labels can carry a ':' (parameterized-cone exponents); keep file
        // names portable.
        let file_label = label.replace(':', "-");
        for (k, curve) in stats.curves.iter().enumerate() {
            if curve.is_empty() {
                continue;
            }
            let path = dir.join(format!("{experiment}_{file_label}_trial{k}_curve.csv"));
            std::fs::write(&path, render_curves_csv(curve)).map_err(io(&path))?;
            written.push(path);
        }
    }
    Ok(written)
}
