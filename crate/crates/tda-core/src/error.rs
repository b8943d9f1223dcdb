//! Error type shared by every fallible operation in the crate.

use alloc::string::String;
use core::fmt;

/// Why an operation rejected its input or detected an internal inconsistency.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A coordinate of the named point is NaN or infinite.
    NonFiniteCoordinate { point: usize },
    /// A value in a series matrix is NaN or infinite.
    NonFiniteValue { row: usize, col: usize },
    /// Scale factor must be finite and strictly positive.
    InvalidScale { factor: f64 },
    /// Perturbation magnitude must be finite and non-negative.
    InvalidMagnitude { magnitude: f64 },
    /// Distance threshold must be finite and non-negative.
    InvalidThreshold { threshold: f64 },
    /// Filtrations are built up to dimension 2 simplices only.
    UnsupportedDimension { requested: usize },
    /// The operation needs more data points than were supplied.
    InsufficientData { required: usize, available: usize },
    /// A filtration handed to the reduction is not sorted or lists a
    /// coface before one of its faces.
    InconsistentFiltration(&'static str),
    /// Min-max normalisation of a constant series is undefined.
    ConstantSeries,
    /// A generator or indicator configuration field is out of range.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFiniteCoordinate { point } => {
                write!(f, "point {point} has a non-finite coordinate")
            }
            Error::NonFiniteValue { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            Error::InvalidScale { factor } => {
                write!(f, "scale factor {factor} is not finite and positive")
            }
            Error::InvalidMagnitude { magnitude } => {
                write!(
                    f,
                    "perturbation magnitude {magnitude} is not finite and non-negative"
                )
            }
            Error::InvalidThreshold { threshold } => {
                write!(
                    f,
                    "distance threshold {threshold} is not finite and non-negative"
                )
            }
            Error::UnsupportedDimension { requested } => {
                write!(f, "filtration dimension {requested} not supported (max 2)")
            }
            Error::InsufficientData {
                required,
                available,
            } => {
                write!(f, "need at least {required} data points, got {available}")
            }
            Error::InconsistentFiltration(what) => {
                write!(f, "inconsistent filtration: {what}")
            }
            Error::ConstantSeries => {
                write!(f, "cannot min-max normalise a constant series")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
