//! Dataset container, synthetic generators for the geometric
//! demonstrations, CSV ingestion, and the CIFAR-10 binary loader.
//!
//! Every generator is deterministic in its seed; the RNG is ChaCha8, which
//! has a portable, documented algorithm, so datasets reproduce bit-exactly
//! across platforms.

use crate::error::{Error, Result};
use crate::network::one_hot;
use crate::tensor::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

/// CIFAR-10 binary record: 1 label byte + 32*32*3 pixel bytes.
pub const CIFAR_RECORD_BYTES: usize = 3073;
pub const CIFAR_FEATURES: usize = 3072;
pub const CIFAR_CLASSES: usize = 10;

/// Default annulus geometry: unit inner disk, ring from 1.5 to 2.5.
pub const ANNULUS_INNER_RADIUS: f64 = 1.0;
pub const ANNULUS_RING_RADII: (f64, f64) = (1.5, 2.5);

/// Labeled samples: features are one column per sample.
#[derive(Debug, Clone)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<usize>,
    class_count: usize,
    name: String,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<usize>, class_count: usize, name: impl Into<String>) -> Result<Self> {
        if labels.len() != features.cols() {
            return Err(Error::InvalidConfig(format!(
                "{} labels for {} samples",
                labels.len(),
                features.cols()
            )));
        }
        if class_count == 0 {
            return Err(Error::InvalidConfig("class count must be positive".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::InvalidConfig(format!(
                "label {bad} out of range for {class_count} classes"
            )));
        }
        if !features.is_finite() {
            return Err(Error::NonFinite { what: "feature", value: f64::NAN });
        }
        Ok(Self { features, labels, class_count, name: name.into() })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.rows()
    }

    /// Sample counts per class.
    pub fn label_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.class_count];
        for &l in &self.labels {
            hist[l] += 1;
        }
        hist
    }

    pub fn one_hot_labels(&self) -> Result<Matrix> {
        one_hot(&self.labels, self.class_count)
    }

    /// New dataset holding the given sample indices, in order.
    pub fn subset(&self, indices: &[usize], name: impl Into<String>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidConfig("empty subset".into()));
        }
        let features = self.features.columns_subset(indices);
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Dataset::new(features, labels, self.class_count, name)
    }
}

/// The four XOR points with their truth-table labels.
pub fn make_xor() -> Dataset {
    let features = Matrix::from_rows(&[
        vec![0.0, 0.0, 1.0, 1.0],
        vec![0.0, 1.0, 0.0, 1.0],
    ])
    .expect("static");
    Dataset::new(features, vec![0, 1, 1, 0], 2, "xor").expect("static")
}

/// Class 0 uniform over the disk of `inner_radius`; class 1 uniform over the
/// ring between `ring_radii`. Not linearly separable by construction.
pub fn make_annulus(
    n_per_class: usize,
    inner_radius: f64,
    ring_radii: (f64, f64),
    seed: u64,
) -> Result<Dataset> {
    let (ring_lo, ring_hi) = ring_radii;
    if !(inner_radius > 0.0 && inner_radius < ring_lo && ring_lo < ring_hi) {
        return Err(Error::InvalidConfig(format!(
            "radii must satisfy 0 < inner < ring.lo < ring.hi, got {inner_radius}, {ring_lo}, {ring_hi}"
        )));
    }
    if n_per_class == 0 {
        return Err(Error::InvalidConfig("n_per_class must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = 2 * n_per_class;
    let mut xs = Vec::with_capacity(total);
    let mut ys = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    // Area-uniform sampling: radius is the square root of a uniform draw
    // over the squared-radius range.
    for _ in 0..n_per_class {
        let r = inner_radius * rng.gen_range(0.0f64..1.0).sqrt();
        let theta = rng.gen_range(0.0..TAU);
        xs.push(r * theta.cos());
        ys.push(r * theta.sin());
        labels.push(0);
    }
    let (lo2, hi2) = (ring_lo * ring_lo, ring_hi * ring_hi);
    for _ in 0..n_per_class {
        let r = rng.gen_range(lo2..hi2).sqrt();
        let theta = rng.gen_range(0.0..TAU);
        xs.push(r * theta.cos());
        ys.push(r * theta.sin());
        labels.push(1);
    }
    let mut features = Matrix::zeros(2, total);
    for j in 0..total {
        features.set(0, j, xs[j]);
        features.set(1, j, ys[j]);
    }
    Dataset::new(features, labels, 2, "annulus")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Loads one CIFAR-10 binary file: records of 3073 bytes, one label byte
/// then 3072 pixel bytes (RGB planes of 32x32). Pixels scale to [0,1].
/// `max_per_class` keeps only the first k records of each class.
pub fn load_cifar10_binary(path: &Path, max_per_class: Option<usize>) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    parse_cifar_records(&bytes, max_per_class, path)
}

fn parse_cifar_records(bytes: &[u8], max_per_class: Option<usize>, path: &Path) -> Result<Dataset> {
    if !bytes.len().is_multiple_of(CIFAR_RECORD_BYTES) {
        return Err(Error::DataFormat {
            path: path.to_path_buf(),
            detail: format!(
                "file size {} is not a multiple of the {CIFAR_RECORD_BYTES}-byte record size",
                bytes.len()
            ),
        });
    }
    let records = bytes.len() / CIFAR_RECORD_BYTES;
    if records == 0 {
        return Err(Error::DataFormat {
            path: path.to_path_buf(),
            detail: "file holds no records".into(),
        });
    }
    let mut kept_per_class = [0usize; CIFAR_CLASSES];
    let mut columns: Vec<&[u8]> = Vec::new();
    let mut labels = Vec::new();
    for rec in 0..records {
        let start = rec * CIFAR_RECORD_BYTES;
        let label = bytes[start] as usize;
        if label >= CIFAR_CLASSES {
            return Err(Error::DataFormat {
                path: path.to_path_buf(),
                detail: format!("record {rec}: label byte {label} exceeds 9"),
            });
        }
        if let Some(cap) = max_per_class {
            if kept_per_class[label] >= cap {
                continue;
            }
        }
        kept_per_class[label] += 1;
        labels.push(label);
        columns.push(&bytes[start + 1..start + CIFAR_RECORD_BYTES]);
    }
    let n = labels.len();
    let mut features = Matrix::zeros(CIFAR_FEATURES, n);
    for (j, col) in columns.iter().enumerate() {
        for (i, &px) in col.iter().enumerate() {
            features.set(i, j, px as f64 / 255.0);
        }
    }
    Dataset::new(features, labels, CIFAR_CLASSES, "cifar10")
}

/// Canonical CIFAR-10 directory layout: five training batches plus
/// `test_batch.bin`. Caps apply per class across the concatenated training
/// batches, read in canonical order.
pub fn load_cifar10_split(
    dir: &Path,
    train_per_class: Option<usize>,
    test_per_class: Option<usize>,
) -> Result<(Dataset, Dataset)> {
    let train_files = [
        "data_batch_1.bin",
        "data_batch_2.bin",
        "data_batch_3.bin",
        "data_batch_4.bin",
        "data_batch_5.bin",
    ];
    let mut bytes = Vec::new();
    let mut last_path = PathBuf::new();
    for name in train_files {
        let path = dir.join(name);
        bytes.extend(std::fs::read(&path).map_err(io_err(&path))?);
        last_path = path;
    }
    let train = parse_cifar_records(&bytes, train_per_class, &last_path)?;
    let test = load_cifar10_binary(&dir.join("test_batch.bin"), test_per_class)?;
    Ok((train, test))
}

/// Numeric CSV with a header row. `label_column` names the class column
/// (header name, or a zero-based column index if no header matches);
/// remaining columns become features in file order. Labels must be
/// non-negative integers.
pub fn load_csv(path: &Path, label_column: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse { row: 0, col: 0, detail: e.to_string() })?
        .clone();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .or_else(|| label_column.parse::<usize>().ok().filter(|&i| i < headers.len()))
        .ok_or_else(|| Error::InvalidConfig(format!(
            "label column '{label_column}' not found in header [{}]",
            headers.iter().collect::<Vec<_>>().join(", ")
        )))?;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            row: row_idx,
            col: 0,
            detail: e.to_string(),
        })?;
        let mut feats = Vec::with_capacity(headers.len().saturating_sub(1));
        for (col_idx, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                row: row_idx,
                col: col_idx,
                detail: format!("'{cell}' is not numeric"),
            })?;
            if col_idx == label_idx {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Error::Parse {
                        row: row_idx,
                        col: col_idx,
                        detail: format!("label '{cell}' is not a non-negative integer"),
                    });
                }
                labels.push(value as usize);
            } else {
                feats.push(value);
            }
        }
        rows.push(feats);
    }
    if rows.is_empty() {
        return Err(Error::InvalidConfig(format!("{} holds no data rows", path.display())));
    }
    let n_features = rows[0].len();
    if n_features == 0 {
        return Err(Error::InvalidConfig("no feature columns".into()));
    }
    let class_count = labels.iter().max().copied().unwrap_or(0) + 1;
    let n = rows.len();
    let mut features = Matrix::zeros(n_features, n);
    for (j, feats) in rows.iter().enumerate() {
        if feats.len() != n_features {
            return Err(Error::Parse {
                row: j,
                col: feats.len(),
                detail: format!("expected {n_features} feature cells, found {}", feats.len()),
            });
        }
        for (i, &v) in feats.iter().enumerate() {
            features.set(i, j, v);
        }
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    Dataset::new(features, labels, class_count, name)
}

/// Deterministic shuffled split. The train side gets
/// `floor(n * fraction)` samples; both sides must end up nonempty.
pub fn split(ds: &Dataset, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "split fraction must lie in (0,1), got {fraction}"
        )));
    }
    let n = ds.n_samples();
    let n_train = (n as f64 * fraction).floor() as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::InvalidConfig(format!(
            "split of {n} samples at {fraction} leaves an empty side"
        )));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Fisher-Yates.
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        indices.swap(i, j);
    }
    let train = ds.subset(&indices[..n_train], format!("{}-train", ds.name()))?;
    let test = ds.subset(&indices[n_train..], format!("{}-test", ds.name()))?;
    Ok((train, test))
}

/// Feature indices whose training standard deviation was zero and got
/// clamped to 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizeReport {
    pub clamped_features: Vec<usize>,
}

/// Standardizes both splits with the train split's per-feature mean and
/// population standard deviation. Zero-variance features keep their mean
/// subtracted but divide by 1, and are reported.
pub fn normalize(train: &Dataset, test: &Dataset) -> Result<(Dataset, Dataset, NormalizeReport)> {
    if train.n_features() != test.n_features() {
        return Err(Error::ShapeMismatch {
            op: "normalize",
            left: (train.n_features(), train.n_samples()),
            right: (test.n_features(), test.n_samples()),
        });
    }
    let d = train.n_features();
    let n = train.n_samples() as f64;
    let mut report = NormalizeReport::default();
    let mut means = vec![0.0; d];
    let mut stds = vec![0.0; d];
    for i in 0..d {
        let row = train.features().row(i);
        let mean = row.iter().sum::<f64>() / n;
        let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        means[i] = mean;
        let std = var.sqrt();
        if std == 0.0 {
            report.clamped_features.push(i);
            stds[i] = 1.0;
        } else {
            stds[i] = std;
        }
    }
    let apply = |ds: &Dataset, suffix: &str| -> Result<Dataset> {
        let mut f = ds.features().clone();
        for i in 0..d {
            for j in 0..ds.n_samples() {
                f.set(i, j, (f.get(i, j) - means[i]) / stds[i]);
            }
        }
        Dataset::new(f, ds.labels().to_vec(), ds.class_count(), format!("{}{suffix}", ds.name()))
    };
    Ok((apply(train, "")?, apply(test, "")?, report))
}

/// Writes records in the CIFAR-10 binary layout; the inverse of
/// [`load_cifar10_binary`]. Used by tests and by synthetic-data tooling.
pub fn write_cifar10_binary(path: &Path, records: &[(u8, Vec<u8>)]) -> Result<()> {
    let mut bytes = Vec::with_capacity(records.len() * CIFAR_RECORD_BYTES);
    for (label, pixels) in records {
        if pixels.len() != CIFAR_FEATURES {
            return Err(Error::InvalidConfig(format!(
                "record needs {CIFAR_FEATURES} pixel bytes, got {}",
                pixels.len()
            )));
        }
        bytes.push(*label);
        bytes.extend_from_slice(pixels);
    }
    std::fs::write(path, bytes).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_truth_table() {
        let ds = make_xor();
        assert_eq!(ds.n_samples(), 4);
        assert_eq!(ds.labels(), &[0, 1, 1, 0]);
        // (1,1) is column 3, (0,1) is column 1.
        assert_eq!(ds.features().column(3), vec![1.0, 1.0]);
        assert_eq!(ds.labels()[3], 0);
        assert_eq!(ds.features().column(1), vec![0.0, 1.0]);
        assert_eq!(ds.labels()[1], 1);
    }

    #[test]
    fn annulus_radii_respect_construction() {
        let ds = make_annulus(200, 1.0, (1.5, 2.5), 7).unwrap();
        for j in 0..ds.n_samples() {
            let p = ds.features().column(j);
            let norm = (p[0] * p[0] + p[1] * p[1]).sqrt();
            if ds.labels()[j] == 0 {
                assert!(norm < 1.0, "class-0 point at norm {norm}");
            } else {
                assert!((1.5..=2.5).contains(&norm), "class-1 point at norm {norm}");
            }
        }
    }

    #[test]
    fn annulus_is_deterministic_per_seed() {
        let a = make_annulus(50, 1.0, (1.5, 2.5), 42).unwrap();
        let b = make_annulus(50, 1.0, (1.5, 2.5), 42).unwrap();
        assert_eq!(a.features().data(), b.features().data());
        let c = make_annulus(50, 1.0, (1.5, 2.5), 43).unwrap();
        assert_ne!(a.features().data(), c.features().data());
    }

    #[test]
    fn annulus_rejects_bad_radius_ordering() {
        assert!(make_annulus(10, 2.0, (1.5, 2.5), 0).is_err());
        assert!(make_annulus(10, 1.0, (2.5, 1.5), 0).is_err());
        assert!(make_annulus(10, 0.0, (1.5, 2.5), 0).is_err());
    }

    #[test]
    fn annulus_is_not_linearly_separable() {
        // Control oracle: hand-rolled logistic regression must stay at or
        // below 75% accuracy on its own training data.
        let ds = make_annulus(250, 1.0, (1.5, 2.5), 3).unwrap();
        let n = ds.n_samples();
        let (mut w0, mut w1, mut b) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..2000 {
            let (mut g0, mut g1, mut gb) = (0.0, 0.0, 0.0);
            for j in 0..n {
                let p = ds.features().column(j);
                let z = w0 * p[0] + w1 * p[1] + b;
                let pred = 1.0 / (1.0 + (-z).exp());
                let err = pred - ds.labels()[j] as f64;
                g0 += err * p[0];
                g1 += err * p[1];
                gb += err;
            }
            w0 -= 0.1 * g0 / n as f64;
            w1 -= 0.1 * g1 / n as f64;
            b -= 0.1 * gb / n as f64;
        }
        let correct = (0..n)
            .filter(|&j| {
                let p = ds.features().column(j);
                let z = w0 * p[0] + w1 * p[1] + b;
                (z > 0.0) as usize == ds.labels()[j]
            })
            .count();
        let acc = correct as f64 / n as f64;
        assert!(acc <= 0.75, "linear control reached {acc}");
    }

    #[test]
    fn cifar_round_trip_and_scaling() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("batch.bin");
        let mut px_a = vec![0u8; CIFAR_FEATURES];
        px_a[0] = 255;
        px_a[1] = 51;
        let px_b = vec![128u8; CIFAR_FEATURES];
        write_cifar10_binary(&path, &[(3, px_a), (7, px_b)]).unwrap();

        let ds = load_cifar10_binary(&path, None).unwrap();
        assert_eq!(ds.n_samples(), 2);
        assert_eq!(ds.labels(), &[3, 7]);
        assert_eq!(ds.features().get(0, 0), 1.0);
        assert_eq!(ds.features().get(1, 0), 0.2);
        assert_eq!(ds.features().get(5, 1), 128.0 / 255.0);
        assert_eq!(ds.label_histogram()[3], 1);
    }

    #[test]
    fn cifar_truncated_record_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        std::fs::write(&path, vec![1u8; CIFAR_RECORD_BYTES + 10]).unwrap();
        assert!(matches!(
            load_cifar10_binary(&path, None),
            Err(Error::DataFormat { .. })
        ));
    }

    #[test]
    fn cifar_label_out_of_range_names_the_record() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad_label.bin");
        let mut bytes = vec![0u8; 2 * CIFAR_RECORD_BYTES];
        bytes[CIFAR_RECORD_BYTES] = 11;
        std::fs::write(&path, bytes).unwrap();
        let err = load_cifar10_binary(&path, None).unwrap_err();
        assert!(err.to_string().contains("record 1"), "{err}");
    }

    #[test]
    fn cifar_per_class_cap_keeps_first_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.bin");
        let records: Vec<(u8, Vec<u8>)> = (0..6)
            .map(|i| ((i % 2) as u8, vec![i as u8; CIFAR_FEATURES]))
            .collect();
        write_cifar10_binary(&path, &records).unwrap();
        let ds = load_cifar10_binary(&path, Some(2)).unwrap();
        assert_eq!(ds.n_samples(), 4);
        assert_eq!(ds.label_histogram()[0], 2);
        assert_eq!(ds.label_histogram()[1], 2);
        // First record of class 0 had constant pixel value 0.
        assert_eq!(ds.features().get(0, 0), 0.0);
    }

    #[test]
    fn missing_cifar_file_is_io_error_with_path() {
        let err = load_cifar10_binary(Path::new("/nonexistent/dir/x.bin"), None).unwrap_err();
        match err {
            Error::Io { path, .. } => assert!(path.to_string_lossy().contains("x.bin")),
            other => panic!("expected Io, got {other:?}"),
        }
    }

    #[test]
    fn csv_load_split_normalize_pipeline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.csv");
        let mut body = String::from("x,y,label\n");
        for i in 0..100 {
            let x = i as f64 / 10.0;
            body.push_str(&format!("{x},{},{}\n", -x + 1.0, i % 2));
        }
        std::fs::write(&path, body).unwrap();

        let ds = load_csv(&path, "label").unwrap();
        assert_eq!(ds.n_samples(), 100);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.class_count(), 2);

        let (train, test) = split(&ds, 0.8, 5).unwrap();
        assert_eq!(train.n_samples(), 80);
        assert_eq!(test.n_samples(), 20);
        let (train2, _) = split(&ds, 0.8, 5).unwrap();
        assert_eq!(train.labels(), train2.labels());
        assert_eq!(train.features().data(), train2.features().data());

        let (ntrain, _ntest, report) = normalize(&train, &test).unwrap();
        assert!(report.clamped_features.is_empty());
        for i in 0..2 {
            let row = ntrain.features().row(i);
            let mean = row.iter().sum::<f64>() / row.len() as f64;
            let var = row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / row.len() as f64;
            assert!(mean.abs() <= 1e-10, "feature {i} mean {mean}");
            assert!((var.sqrt() - 1.0).abs() <= 1e-10, "feature {i} std {}", var.sqrt());
        }
    }

    #[test]
    fn csv_non_numeric_cell_reports_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b,label\n1.0,2.0,0\n1.0,oops,1\n").unwrap();
        match load_csv(&path, "label").unwrap_err() {
            Error::Parse { row, col, .. } => {
                assert_eq!((row, col), (1, 1));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn zero_variance_feature_is_clamped_and_reported() {
        let features = Matrix::from_rows(&[
            vec![1.0, 1.0, 1.0, 1.0],
            vec![0.0, 1.0, 2.0, 3.0],
        ])
        .unwrap();
        let ds = Dataset::new(features, vec![0, 1, 0, 1], 2, "t").unwrap();
        let (train, test) = split(&ds, 0.5, 0).unwrap();
        let (ntrain, _, report) = normalize(&train, &test).unwrap();
        assert_eq!(report.clamped_features, vec![0]);
        // Clamped feature: mean subtracted, divided by 1 -> all zeros.
        assert!(ntrain.features().row(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn split_rejects_degenerate_fractions() {
        let ds = make_xor();
        assert!(split(&ds, 0.0, 0).is_err());
        assert!(split(&ds, 1.0, 0).is_err());
        assert!(split(&ds, 0.1, 0).is_err()); // floor(0.4) = 0 train samples
    }
}
