use thiserror::Error;

use crate::fock::TruncationReport;

/// Errors produced by parameter validation, the closed-form evaluators,
/// the spectral representation and the Fock-space oracle.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimensionless temperature must be finite and positive, got {0}")]
    Temperature(f64),

    #[error("squeeze magnitude must be finite and nonnegative, got {0}")]
    SqueezeMagnitude(f64),

    #[error("coherent amplitude magnitude must be finite and nonnegative, got {0}")]
    AmplitudeMagnitude(f64),

    #[error("phase must be finite, got {0}")]
    Phase(f64),

    #[error("{name} must be finite and positive, got {value}")]
    PhysicalUnit { name: &'static str, value: f64 },

    #[error("invalid spectral atom: {0}")]
    InvalidAtom(String),

    #[error("spectral function has an infinite-temperature atom with zero chemical potential")]
    DivergentAtom,

    #[error("spectral function has no finite-temperature atom")]
    NoFiniteTemperatureAtom,

    #[error("Fock space dimension must be at least 2, got {0}")]
    FockDimension(usize),

    #[error("squeeze magnitude {r} exceeds the oracle limit r_max = {r_max}")]
    SqueezeTooLarge { r: f64, r_max: f64 },

    #[error("|alpha|^2 = {amplitude_sq} too large for Fock dimension {dim}")]
    AmplitudeTooLarge { amplitude_sq: f64, dim: usize },

    #[error("{operator} unitarity defect {defect:e} on the leading block exceeds {tolerance:e} at dimension {dim}")]
    Unitarity {
        operator: &'static str,
        defect: f64,
        tolerance: f64,
        dim: usize,
    },

    #[error("relative tolerance must be finite and positive, got {0}")]
    Tolerance(f64),

    #[error("truncation did not converge up to dimension {}", .0.dims_tried.last().copied().unwrap_or(0))]
    NotConverged(Box<TruncationReport>),
}

pub type Result<T> = std::result::Result<T, Error>;
