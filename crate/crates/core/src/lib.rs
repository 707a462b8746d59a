//! From-scratch dense neural-network library built around cone-like
//! activation functions.
//!
//! The cone family (`Cone`, `ParabolicCone`, `ParameterizedCone`) is positive
//! only on the finite interval (0, 2), so a single neuron's positive region is
//! a hyperstrip — the band between two parallel hyperplanes — instead of the
//! half-space that ReLU-like and sigmoidal activations produce. The modules
//! here implement those functions exactly (forward maps and analytic
//! derivatives), the resulting decision-region geometry, dense networks with
//! softmax/cross-entropy training under Adam, and a seeded multi-trial
//! experiment harness that reports mean/median/std/best/worst test accuracy.
//!
//! Everything is `f64`, deterministic per seed (ChaCha8), and desk-scale by
//! design: no BLAS, no GPU, no convolutions.

pub mod activations;
pub mod data;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod network;
pub mod optim;
pub mod tensor;

pub use activations::ActivationKind;
pub use error::{Error, Result};
pub use geometry::{Bounds, NeuronGeometry, RasterGrid, RegionLabel};
pub use network::{DenseLayer, ForwardTrace, Gradients, InitOptions, LayerSpec, Network};
pub use optim::{sgd_step, AdamConfig, AdamState};
pub use tensor::Matrix;
