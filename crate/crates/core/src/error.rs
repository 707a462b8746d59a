//! Crate-wide error type.

use std::fmt;
use std::path::PathBuf;

/// Every fallible operation in this crate reports one of these.
#[derive(Debug)]
pub enum Error {
    /// Two matrices (or a matrix and a vector) do not conform for the
    /// requested operation. Carries both shapes as `(rows, cols)`.
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A scalar argument was NaN or infinite where a finite value is required.
    NonFinite { what: &'static str, value: f64 },
    /// A configuration value violates its documented constraints.
    InvalidConfig(String),
    /// Weight vector with no nonzero entry; its hyperplane is undefined.
    DegenerateWeights,
    /// The activation's zero set is empty, so the neuron has no decision
    /// boundary (Sigmoid and Softplus are strictly positive).
    NoBoundary { kind: &'static str },
    /// Label matrix is not one-hot.
    InvalidLabels { column: usize, detail: String },
    /// A serialized model stream is malformed. `offset` is the byte position
    /// at which decoding failed.
    Format { offset: usize, detail: String },
    /// A data file violates its binary layout.
    DataFormat { path: PathBuf, detail: String },
    /// Training produced a non-finite loss or gradient.
    Diverged { layer: usize },
    /// File-system failure, with the path that caused it.
    Io { path: PathBuf, source: std::io::Error },
    /// A CSV cell could not be parsed. Row and column are zero-based data
    /// coordinates (the header row is not counted).
    Parse { row: usize, col: usize, detail: String },
    /// An activation name that is not in the table.
    UnknownActivation { name: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { op, left, right } => write!(
                f,
                "{op}: shapes do not conform: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::NonFinite { what, value } => {
                write!(f, "{what} must be finite, got {value}")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::DegenerateWeights => {
                write!(f, "weight vector is all-zero; the neuron has no hyperplane")
            }
            Error::NoBoundary { kind } => write!(
                f,
                "{kind} is strictly positive everywhere and has no decision boundary"
            ),
            Error::InvalidLabels { column, detail } => {
                write!(f, "labels are not one-hot at column {column}: {detail}")
            }
            Error::Format { offset, detail } => {
                write!(f, "malformed model stream at byte {offset}: {detail}")
            }
            Error::DataFormat { path, detail } => {
                write!(f, "{}: {detail}", path.display())
            }
            Error::Diverged { layer } => {
                write!(f, "training diverged: non-finite values in layer {layer}")
            }
            Error::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Error::Parse { row, col, detail } => {
                write!(f, "parse error at row {row}, column {col}: {detail}")
            }
            Error::UnknownActivation { name } => write!(
                f,
                "unknown activation '{name}'; valid names: {}",
                crate::activations::VALID_NAMES.join(", ")
            ),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
