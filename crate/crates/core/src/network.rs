//! Dense feed-forward networks with per-layer activation and a
//! softmax/cross-entropy head, plus exact reverse-mode gradients and a
//! versioned binary model format.
//!
//! Batches are one sample per column. Hidden layers carry one of the table
//! activations; the final (logit) layer has no activation and feeds the
//! softmax head, which is computed through log-sum-exp so the loss stays
//! finite for logits up to +-1e3.

use crate::activations::ActivationKind;
use crate::error::{Error, Result};
use crate::tensor::Matrix;
use rand::Rng;

/// One dense layer: `out_dim x in_dim` weights, `out_dim x 1` bias, and an
/// optional activation (`None` marks the logit layer feeding the head).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    weights: Matrix,
    bias: Matrix,
    activation: Option<ActivationKind>,
}

impl DenseLayer {
    pub fn new(weights: Matrix, bias: Matrix, activation: Option<ActivationKind>) -> Result<Self> {
        if bias.cols() != 1 || bias.rows() != weights.rows() {
            return Err(Error::ShapeMismatch {
                op: "dense layer",
                left: weights.shape(),
                right: bias.shape(),
            });
        }
        if let Some(&bad) = weights
            .data()
            .iter()
            .chain(bias.data())
            .find(|v| !v.is_finite())
        {
            return Err(Error::NonFinite { what: "layer parameter", value: bad });
        }
        Ok(Self { weights, bias, activation })
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    pub fn bias(&self) -> &Matrix {
        &self.bias
    }

    pub fn activation(&self) -> Option<ActivationKind> {
        self.activation
    }

    pub(crate) fn params_mut(&mut self) -> (&mut Matrix, &mut Matrix) {
        (&mut self.weights, &mut self.bias)
    }
}

/// Width and activation of one hidden layer, for [`Network::init`].
#[derive(Debug, Clone, Copy)]
pub struct LayerSpec {
    pub width: usize,
    pub kind: ActivationKind,
}

/// Initialization switches. `cone_peak_bias` starts cone-family biases at +1
/// so initial pre-activations sit on the cone peak instead of the z = 0 zero.
#[derive(Debug, Clone, Copy)]
pub struct InitOptions {
    pub cone_peak_bias: bool,
}

impl Default for InitOptions {
    fn default() -> Self {
        Self { cone_peak_bias: true }
    }
}

/// Ordered dense layers; the last layer's outputs are the logits of the
/// softmax/cross-entropy head, so its `out_dim` is the class count.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    layers: Vec<DenseLayer>,
}

/// Cached per-layer pre-activations and activations from one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardTrace {
    /// z_k = W_k a_{k-1} + b_k, one per layer.
    pub pre_activations: Vec<Matrix>,
    /// a_k = g_k(z_k); for the logit layer a = z.
    pub activations: Vec<Matrix>,
    /// Column-wise log-softmax of the logits.
    pub log_probabilities: Matrix,
    /// Column-wise softmax of the logits; each column sums to 1.
    pub probabilities: Matrix,
}

impl ForwardTrace {
    pub fn logits(&self) -> &Matrix {
        self.activations.last().expect("network has at least one layer")
    }
}

/// Per-layer parameter gradients, shaped like the parameters themselves.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub layers: Vec<LayerGrads>,
}

#[derive(Debug, Clone)]
pub struct LayerGrads {
    pub weights: Matrix,
    pub bias: Matrix,
}

impl Network {
    /// Validates that adjacent layer dimensions chain.
    pub fn new(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidConfig("network needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(Error::ShapeMismatch {
                    op: "layer chain",
                    left: pair[0].weights.shape(),
                    right: pair[1].weights.shape(),
                });
            }
        }
        Ok(Self { layers })
    }

    /// Fresh network with Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out)))
    /// and zero biases; cone-family hidden layers get bias +1 when
    /// `opts.cone_peak_bias` is set. The last layer is the linear logit layer.
    pub fn init(
        input_dim: usize,
        hidden: &[LayerSpec],
        classes: usize,
        rng: &mut impl Rng,
        opts: InitOptions,
    ) -> Result<Self> {
        if input_dim == 0 || classes == 0 || hidden.iter().any(|l| l.width == 0) {
            return Err(Error::InvalidConfig("layer widths must be positive".into()));
        }
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut fan_in = input_dim;
        for spec in hidden {
            layers.push(init_layer(fan_in, spec.width, Some(spec.kind), rng, opts)?);
            fan_in = spec.width;
        }
        layers.push(init_layer(fan_in, classes, None, rng, opts)?);
        Self::new(layers)
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn class_count(&self) -> usize {
        self.layers.last().expect("nonempty").out_dim()
    }

    /// Full forward pass over a batch (samples as columns).
    pub fn forward(&self, batch: &Matrix) -> Result<ForwardTrace> {
        if batch.rows() != self.input_dim() {
            return Err(Error::ShapeMismatch {
                op: "forward",
                left: (self.input_dim(), 1),
                right: batch.shape(),
            });
        }
        let mut pre_activations = Vec::with_capacity(self.layers.len());
        let mut activations: Vec<Matrix> = Vec::with_capacity(self.layers.len());
        for (li, layer) in self.layers.iter().enumerate() {
            let z = {
                let input = if li == 0 { batch } else { &activations[li - 1] };
                layer.weights.matmul(input)?.add_broadcast_col(&layer.bias)?
            };
            let a = match layer.activation {
                Some(kind) => z.elementwise(|v| kind.value(v)),
                None => z.clone(),
            };
            pre_activations.push(z);
            activations.push(a);
        }
        let logits = activations.last().expect("nonempty");
        let log_probabilities = log_softmax_columns(logits);
        let probabilities = log_probabilities.elementwise(f64::exp);
        Ok(ForwardTrace { pre_activations, activations, log_probabilities, probabilities })
    }

    /// Mean categorical cross-entropy over the batch and exact reverse-mode
    /// gradients for every parameter. Labels must be one-hot columns.
    pub fn loss_and_grads(&self, batch: &Matrix, onehot: &Matrix) -> Result<(f64, Gradients)> {
        let trace = self.forward(batch)?;
        validate_one_hot(onehot, self.class_count(), batch.cols())?;
        let batch_size = batch.cols() as f64;

        let mut loss = 0.0;
        for i in 0..onehot.rows() {
            for j in 0..onehot.cols() {
                if onehot.get(i, j) == 1.0 {
                    loss -= trace.log_probabilities.get(i, j);
                }
            }
        }
        loss /= batch_size;

        // Softmax + cross-entropy collapse to (p - y) / B at the head input;
        // a final-layer activation (unusual but allowed) chains through its
        // slope like any other.
        let mut delta = trace.probabilities.sub(onehot)?.scale(1.0 / batch_size);
        if let Some(kind) = self.layers.last().expect("nonempty").activation {
            let last_z = trace.pre_activations.last().expect("nonempty");
            delta = delta.hadamard(&last_z.elementwise(|v| kind.slope(v)))?;
        }
        let mut grads = vec![None; self.layers.len()];
        for idx in (0..self.layers.len()).rev() {
            let input = if idx == 0 { batch } else { &trace.activations[idx - 1] };
            let weight_grad = delta.matmul(&input.transpose())?;
            let bias_grad = delta.row_sums();
            grads[idx] = Some(LayerGrads { weights: weight_grad, bias: bias_grad });
            if idx > 0 {
                let upstream = self.layers[idx].weights.transpose().matmul(&delta)?;
                delta = match self.layers[idx - 1].activation {
                    Some(kind) => {
                        let slopes = trace.pre_activations[idx - 1].elementwise(|v| kind.slope(v));
                        upstream.hadamard(&slopes)?
                    }
                    None => upstream,
                };
            }
        }
        let layers = grads.into_iter().map(|g| g.expect("filled")).collect();
        Ok((loss, Gradients { layers }))
    }

    /// Argmax class per sample; ties resolve to the lowest index.
    pub fn predict_classes(&self, batch: &Matrix) -> Result<Vec<usize>> {
        let trace = self.forward(batch)?;
        let probs = &trace.probabilities;
        let mut classes = Vec::with_capacity(probs.cols());
        for j in 0..probs.cols() {
            let mut best = 0;
            for i in 1..probs.rows() {
                if probs.get(i, j) > probs.get(best, j) {
                    best = i;
                }
            }
            classes.push(best);
        }
        Ok(classes)
    }
}

fn init_layer(
    in_dim: usize,
    out_dim: usize,
    activation: Option<ActivationKind>,
    rng: &mut impl Rng,
    opts: InitOptions,
) -> Result<DenseLayer> {
    let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
    let weights = Matrix::random_uniform(out_dim, in_dim, -limit, limit, rng);
    let bias_value = match activation {
        Some(kind) if opts.cone_peak_bias && kind.is_cone_family() => 1.0,
        _ => 0.0,
    };
    let bias = Matrix::from_fn(out_dim, 1, |_, _| bias_value);
    DenseLayer::new(weights, bias, activation)
}

/// Column-wise log-softmax via max subtraction and log-sum-exp.
pub fn log_softmax_columns(logits: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(logits.rows(), logits.cols());
    for j in 0..logits.cols() {
        let mut max = f64::NEG_INFINITY;
        for i in 0..logits.rows() {
            max = max.max(logits.get(i, j));
        }
        let mut sum = 0.0;
        for i in 0..logits.rows() {
            sum += (logits.get(i, j) - max).exp();
        }
        let lse = max + sum.ln();
        for i in 0..logits.rows() {
            out.set(i, j, logits.get(i, j) - lse);
        }
    }
    out
}

/// One-hot label matrix (classes x samples) from class indices.
pub fn one_hot(labels: &[usize], classes: usize) -> Result<Matrix> {
    let mut m = Matrix::zeros(classes, labels.len());
    for (j, &label) in labels.iter().enumerate() {
        if label >= classes {
            return Err(Error::InvalidConfig(format!(
                "label {label} out of range for {classes} classes"
            )));
        }
        m.set(label, j, 1.0);
    }
    Ok(m)
}

fn validate_one_hot(onehot: &Matrix, classes: usize, samples: usize) -> Result<()> {
    if onehot.rows() != classes || onehot.cols() != samples {
        return Err(Error::ShapeMismatch {
            op: "labels",
            left: (classes, samples),
            right: onehot.shape(),
        });
    }
    for j in 0..onehot.cols() {
        let mut ones = 0;
        for i in 0..onehot.rows() {
            let v = onehot.get(i, j);
            if v == 1.0 {
                ones += 1;
            } else if v != 0.0 {
                return Err(Error::InvalidLabels {
                    column: j,
                    detail: format!("entry {v} is neither 0 nor 1"),
                });
            }
        }
        if ones != 1 {
            return Err(Error::InvalidLabels {
                column: j,
                detail: format!("{ones} entries set, expected exactly 1"),
            });
        }
    }
    Ok(())
}

// --- binary model format -------------------------------------------------
//
// Little-endian stream: magic "CONE", version u32, layer count u32, then per
// layer: in_dim u32, out_dim u32, activation tag u8, beta f64, weights
// (out*in f64, row-major), bias (out f64). No trailing bytes.

const MAGIC: &[u8; 4] = b"CONE";
const FORMAT_VERSION: u32 = 1;
const LINEAR_TAG: u8 = 255;
const VALID_TAGS: &str = "0-13 (table order) or 255 (linear)";

fn activation_tag(activation: Option<ActivationKind>) -> (u8, f64) {
    use ActivationKind::*;
    match activation {
        None => (LINEAR_TAG, 1.0),
        Some(Cone) => (0, 1.0),
        Some(ParabolicCone) => (1, 1.0),
        Some(ParameterizedCone { beta }) => (2, beta),
        Some(Sigmoid) => (3, 1.0),
        Some(Tanh) => (4, 1.0),
        Some(LiSHT) => (5, 1.0),
        Some(Softplus) => (6, 1.0),
        Some(ReLU) => (7, 1.0),
        Some(LeakyReLU) => (8, 1.0),
        Some(GELU) => (9, 1.0),
        Some(SELU) => (10, 1.0),
        Some(Mish) => (11, 1.0),
        Some(Swish) => (12, 1.0),
        Some(ELU) => (13, 1.0),
    }
}

fn activation_from_tag(tag: u8, beta: f64, offset: usize) -> Result<Option<ActivationKind>> {
    use ActivationKind::*;
    Ok(match tag {
        LINEAR_TAG => None,
        0 => Some(Cone),
        1 => Some(ParabolicCone),
        2 => {
            if !(beta.is_finite() && beta > 0.0) {
                return Err(Error::Format {
                    offset,
                    detail: format!("parameterized-cone exponent must be positive, got {beta}"),
                });
            }
            Some(ParameterizedCone { beta })
        }
        3 => Some(Sigmoid),
        4 => Some(Tanh),
        5 => Some(LiSHT),
        6 => Some(Softplus),
        7 => Some(ReLU),
        8 => Some(LeakyReLU),
        9 => Some(GELU),
        10 => Some(SELU),
        11 => Some(Mish),
        12 => Some(Swish),
        13 => Some(ELU),
        other => {
            return Err(Error::Format {
                offset,
                detail: format!("unknown activation tag {other}; valid tags are {VALID_TAGS}"),
            })
        }
    })
}

struct Reader<'a> {
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if n > self.bytes.len() - self.offset {
            return Err(Error::Format {
                offset: self.offset,
                detail: format!("stream truncated while reading {what}"),
            });
        }
        let slice = &self.bytes[self.offset..self.offset + n];
        self.offset += n;
        Ok(slice)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let b = self.take(4, what)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.take(1, what)?[0])
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        let b = self.take(8, what)?;
        let mut buf = [0u8; 8];
        buf.copy_from_slice(b);
        Ok(f64::from_le_bytes(buf))
    }

    fn f64_block(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let nbytes = count.checked_mul(8).ok_or(Error::Format {
            offset: self.offset,
            detail: format!("{what} length overflows"),
        })?;
        let b = self.take(nbytes, what)?;
        Ok(b.chunks_exact(8)
            .map(|c| f64::from_le_bytes([c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]]))
            .collect())
    }
}

impl Network {
    /// Serializes every parameter bit-exactly.
    pub fn save(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.layers.len() as u32).to_le_bytes());
        for layer in &self.layers {
            out.extend_from_slice(&(layer.in_dim() as u32).to_le_bytes());
            out.extend_from_slice(&(layer.out_dim() as u32).to_le_bytes());
            let (tag, beta) = activation_tag(layer.activation);
            out.push(tag);
            out.extend_from_slice(&beta.to_le_bytes());
            for v in layer.weights.data() {
                out.extend_from_slice(&v.to_le_bytes());
            }
            for v in layer.bias.data() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    /// Inverse of [`Network::save`]; any malformed stream yields a format
    /// error naming the byte offset, never a panic.
    pub fn load(bytes: &[u8]) -> Result<Network> {
        let mut r = Reader { bytes, offset: 0 };
        let magic = r.take(4, "magic")?;
        if magic != MAGIC {
            return Err(Error::Format { offset: 0, detail: "bad magic, expected \"CONE\"".into() });
        }
        let version = r.u32("version")?;
        if version != FORMAT_VERSION {
            return Err(Error::Format {
                offset: 4,
                detail: format!("unsupported format version {version}, expected {FORMAT_VERSION}"),
            });
        }
        let layer_count = r.u32("layer count")? as usize;
        if layer_count == 0 {
            return Err(Error::Format { offset: 8, detail: "network has zero layers".into() });
        }
        let mut layers = Vec::with_capacity(layer_count.min(1024));
        for l in 0..layer_count {
            let dim_offset = r.offset;
            let in_dim = r.u32("in_dim")? as usize;
            let out_dim = r.u32("out_dim")? as usize;
            if in_dim == 0 || out_dim == 0 {
                return Err(Error::Format {
                    offset: dim_offset,
                    detail: format!("layer {l} has zero dimension {in_dim}x{out_dim}"),
                });
            }
            let count = out_dim.checked_mul(in_dim).ok_or(Error::Format {
                offset: dim_offset,
                detail: format!("layer {l} dimensions overflow"),
            })?;
            let tag_offset = r.offset;
            let tag = r.u8("activation tag")?;
            let beta = r.f64("activation parameter")?;
            let activation = activation_from_tag(tag, beta, tag_offset)?;
            let param_offset = r.offset;
            let weights = Matrix::new(out_dim, in_dim, r.f64_block(count, "weights")?)
                .expect("sizes checked");
            let bias = Matrix::new(out_dim, 1, r.f64_block(out_dim, "bias")?)
                .expect("sizes checked");
            if !weights.is_finite() || !bias.is_finite() {
                return Err(Error::Format {
                    offset: param_offset,
                    detail: format!("layer {l} contains non-finite parameters"),
                });
            }
            layers.push(DenseLayer { weights, bias, activation });
        }
        if r.offset != bytes.len() {
            return Err(Error::Format {
                offset: r.offset,
                detail: format!("{} trailing bytes after last layer", bytes.len() - r.offset),
            });
        }
        Network::new(layers).map_err(|e| Error::Format {
            offset: 8,
            detail: format!("inconsistent layer chain: {e}"),
        })
    }
}
