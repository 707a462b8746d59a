//! Decision-region analysis for a single neuron.
//!
//! A neuron computes a = g(w.x + b). The inputs with strictly positive
//! output form C+, strictly negative C-, and the zero set is the decision
//! boundary B(g). For single-zero activations B(g) is the one hyperplane
//! w.x + b = 0; for the cone family it is the pair of parallel hyperplanes
//! w.x + b = 0 and w.x + b = 2, so C+ is the hyperstrip between them rather
//! than a half-space.

use crate::activations::ActivationKind;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::tensor::Matrix;

/// Which side of a neuron's decision sets a point falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    PositiveSet,
    NegativeSet,
    Boundary,
}

impl RegionLabel {
    /// Small-integer encoding used by raster serialization:
    /// negative = 0, positive = 1, boundary = 2.
    pub fn code(&self) -> u8 {
        match self {
            RegionLabel::NegativeSet => 0,
            RegionLabel::PositiveSet => 1,
            RegionLabel::Boundary => 2,
        }
    }
}

/// Default tolerance band around g(z) = 0 when classifying points.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// A single neuron: weight vector, bias, and activation.
#[derive(Debug, Clone)]
pub struct NeuronGeometry {
    weights: Vec<f64>,
    bias: f64,
    kind: ActivationKind,
}

/// One hyperplane of a neuron's decision boundary, expressed in the neuron's
/// own frame: the set of x with w.x + b = level.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// The pre-activation value the plane sits at (0 for the lower plane,
    /// delta for the upper plane of a cone neuron).
    pub level: f64,
}

impl NeuronGeometry {
    /// Rejects the degenerate all-zero weight vector.
    pub fn new(weights: Vec<f64>, bias: f64, kind: ActivationKind) -> Result<Self> {
        if weights.is_empty() || weights.iter().all(|&w| w == 0.0) {
            return Err(Error::DegenerateWeights);
        }
        if let Some(&bad) = weights.iter().chain([&bias]).find(|w| !w.is_finite()) {
            return Err(Error::NonFinite { what: "neuron parameter", value: bad });
        }
        Ok(Self { weights, bias, kind })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn kind(&self) -> ActivationKind {
        self.kind
    }

    /// Pre-activation w.x + b.
    pub fn pre_activation(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::ShapeMismatch {
                op: "pre_activation",
                left: (self.weights.len(), 1),
                right: (x.len(), 1),
            });
        }
        Ok(self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias)
    }

    /// Labels a point by the sign of g(w.x + b); outputs within
    /// `boundary_tol` of zero map to `Boundary`.
    pub fn classify_point(&self, x: &[f64], boundary_tol: f64) -> Result<RegionLabel> {
        let z = self.pre_activation(x)?;
        let a = self.kind.forward(z)?;
        Ok(if a.abs() <= boundary_tol {
            RegionLabel::Boundary
        } else if a > 0.0 {
            RegionLabel::PositiveSet
        } else {
            RegionLabel::NegativeSet
        })
    }

    /// The hyperplane(s) where the neuron's output is exactly zero.
    ///
    /// Cone-family kinds return two parallel planes at pre-activation levels
    /// 0 and delta (= 2); every other kind with a zero at the origin returns
    /// the single plane at level 0. Sigmoid and Softplus have no zeros and
    /// return a no-boundary error.
    pub fn boundary_hyperplanes(&self) -> Result<Vec<Hyperplane>> {
        let plane = |level: f64| Hyperplane {
            weights: self.weights.clone(),
            bias: self.bias,
            level,
        };
        match self.kind {
            ActivationKind::Sigmoid | ActivationKind::Softplus => {
                Err(Error::NoBoundary { kind: self.kind.name() })
            }
            _ => {
                if let Some((lo, hi)) = self.kind.positive_interval() {
                    Ok(vec![plane(lo), plane(hi)])
                } else {
                    Ok(vec![plane(0.0)])
                }
            }
        }
    }
}

/// Rectangle in the plane, the sampling window for rasters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let vals = [x_min, x_max, y_min, y_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "raster bound", value: f64::NAN });
        }
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::InvalidConfig(format!(
                "bounds must form a nonempty rectangle, got x [{x_min}, {x_max}] y [{y_min}, {y_max}]"
            )));
        }
        Ok(Self { x_min, x_max, y_min, y_max })
    }
}

/// Row-major grid of small integer cell values (region codes or class
/// indices) sampled over a rectangle. Row 0 is y_min; column 0 is x_min;
/// the last row/column sample the exact upper bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub bounds: Bounds,
    pub resolution: usize,
    /// resolution * resolution cell values, row-major.
    pub cells: Vec<u8>,
}

impl RasterGrid {
    pub fn cell(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.resolution + col]
    }
}

/// Lattice coordinate along one axis; endpoints are exact.
fn lattice(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i == 0 {
        lo
    } else if i == n - 1 {
        hi
    } else {
        lo + (i as f64) * (hi - lo) / ((n - 1) as f64)
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "raster resolution must be at least 2, got {resolution}"
        )));
    }
    Ok(())
}

/// Samples a single neuron's region label over a rectangle. The neuron must
/// be 2-dimensional.
pub fn raster_neuron(
    geom: &NeuronGeometry,
    bounds: Bounds,
    resolution: usize,
    boundary_tol: f64,
) -> Result<RasterGrid> {
    check_resolution(resolution)?;
    if geom.weights().len() != 2 {
        return Err(Error::InvalidConfig(format!(
            "raster requires a 2-d neuron, got {} inputs",
            geom.weights().len()
        )));
    }
    let mut cells = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let y = lattice(bounds.y_min, bounds.y_max, resolution, row);
        for col in 0..resolution {
            let x = lattice(bounds.x_min, bounds.x_max, resolution, col);
            cells.push(geom.classify_point(&[x, y], boundary_tol)?.code());
        }
    }
    Ok(RasterGrid { bounds, resolution, cells })
}

/// Samples a trained network's argmax class over a rectangle. The network
/// must take 2-dimensional inputs.
pub fn raster_network(net: &Network, bounds: Bounds, resolution: usize) -> Result<RasterGrid> {
    check_resolution(resolution)?;
    if net.input_dim() != 2 {
        return Err(Error::InvalidConfig(format!(
            "raster requires a 2-input network, got {} inputs",
            net.input_dim()
        )));
    }
    if net.class_count() > 256 {
        return Err(Error::InvalidConfig(
            "raster cells are one byte; networks with more than 256 classes are not supported"
                .into(),
        ));
    }
    // One forward pass per grid row keeps memory flat.
    let mut cells = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        let y = lattice(bounds.y_min, bounds.y_max, resolution, row);
        let batch = Matrix::from_fn(2, resolution, |i, col| {
            if i == 0 {
                lattice(bounds.x_min, bounds.x_max, resolution, col)
            } else {
                y
            }
        });
        let classes = net.predict_classes(&batch)?;
        cells.extend(classes.into_iter().map(|c| c as u8));
    }
    Ok(RasterGrid { bounds, resolution, cells })
}
