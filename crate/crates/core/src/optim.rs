//! Adam with bias correction (the training protocol's optimizer) and plain
//! SGD as a control.

use crate::error::{Error, Result};
use crate::network::{Gradients, Network};
use crate::tensor::Matrix;

/// Adam hyperparameters. Defaults follow the protocol: lr 1e-4 with the
/// standard moment coefficients.
#[derive(Debug, Clone, Copy)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { lr: 1e-4, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

impl AdamConfig {
    pub fn with_lr(lr: f64) -> Self {
        Self { lr, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Error::InvalidConfig(format!("learning rate must be positive, got {}", self.lr)));
        }
        for (name, v) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        Ok(())
    }
}

/// First/second moment estimates for one parameter matrix.
#[derive(Debug, Clone)]
struct Moments {
    m: Matrix,
    v: Matrix,
}

/// Optimizer state for one network: step counter plus per-parameter moments
/// shaped exactly like the parameters.
#[derive(Debug, Clone)]
pub struct AdamState {
    config: AdamConfig,
    step: u64,
    /// Two entries per layer: weights then bias.
    moments: Vec<Moments>,
}

impl AdamState {
    pub fn new(net: &Network, config: AdamConfig) -> Result<Self> {
        config.validate()?;
        let moments = net
            .layers()
            .iter()
            .flat_map(|l| {
                [
                    Moments {
                        m: Matrix::zeros(l.weights().rows(), l.weights().cols()),
                        v: Matrix::zeros(l.weights().rows(), l.weights().cols()),
                    },
                    Moments {
                        m: Matrix::zeros(l.bias().rows(), 1),
                        v: Matrix::zeros(l.bias().rows(), 1),
                    },
                ]
            })
            .collect();
        Ok(Self { config, step: 0, moments })
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn config(&self) -> AdamConfig {
        self.config
    }

    /// One Adam update over every parameter of the network. Rejects
    /// non-finite gradients with the offending layer index.
    pub fn step(&mut self, net: &mut Network, grads: &Gradients) -> Result<()> {
        for (idx, g) in grads.layers.iter().enumerate() {
            if !g.weights.is_finite() || !g.bias.is_finite() {
                return Err(Error::Diverged { layer: idx });
            }
        }
        self.step += 1;
        let t = self.step;
        for (idx, layer) in net.layers_mut().iter_mut().enumerate() {
            let (weights, bias) = layer.params_mut();
            let lg = &grads.layers[idx];
            adam_update(weights, &mut self.moments[2 * idx], &lg.weights, t, &self.config);
            adam_update(bias, &mut self.moments[2 * idx + 1], &lg.bias, t, &self.config);
        }
        Ok(())
    }
}

/// The scalar Adam recurrence applied entrywise:
/// m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;
/// p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps).
fn adam_update(param: &mut Matrix, moments: &mut Moments, grad: &Matrix, t: u64, cfg: &AdamConfig) {
    debug_assert_eq!(param.shape(), grad.shape());
    let m_corr = 1.0 - cfg.beta1.powi(t as i32);
    let v_corr = 1.0 - cfg.beta2.powi(t as i32);
    let p = param.data_mut();
    let m = moments.m.data_mut();
    let v = moments.v.data_mut();
    for i in 0..p.len() {
        let g = grad.data()[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = m[i] / m_corr;
        let v_hat = v[i] / v_corr;
        p[i] -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
}

/// Plain gradient descent: p <- p - lr * g, for every parameter.
pub fn sgd_step(net: &mut Network, grads: &Gradients, lr: f64) -> Result<()> {
    for (idx, g) in grads.layers.iter().enumerate() {
        if !g.weights.is_finite() || !g.bias.is_finite() {
            return Err(Error::Diverged { layer: idx });
        }
    }
    for (idx, layer) in net.layers_mut().iter_mut().enumerate() {
        let (weights, bias) = layer.params_mut();
        let lg = &grads.layers[idx];
        sgd_update(weights, &lg.weights, lr);
        sgd_update(bias, &lg.bias, lr);
    }
    Ok(())
}

fn sgd_update(param: &mut Matrix, grad: &Matrix, lr: f64) {
    debug_assert_eq!(param.shape(), grad.shape());
    for (p, g) in param.data_mut().iter_mut().zip(grad.data()) {
        *p -= lr * g;
    }
}
