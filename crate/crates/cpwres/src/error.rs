//! Crate-wide error type and the exit-code mapping used by the CLI.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside a function's mathematical domain (e.g. elliptic modulus ≥ 1,
    /// non-positive film thickness).
    #[error("domain error: {0}")]
    Domain(String),

    /// Too few points for the requested operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The sweep window does not contain a resolvable resonance.
    #[error("no resonance found: {0}")]
    NoResonanceFound(String),

    /// An iterative fit hit its iteration cap without meeting tolerances.
    #[error("fit did not converge: {0}")]
    NonConvergence(String),

    /// Collinear or coincident points handed to the circle fit.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A measured frequency above the geometric-only prediction implies
    /// negative kinetic inductance.
    #[error(
        "negative kinetic inductance: measured f0 = {measured_f0:.6e} Hz exceeds the \
         geometric-only prediction {geometric_f0:.6e} Hz"
    )]
    NegativeKineticInductance { measured_f0: f64, geometric_f0: f64 },

    /// |S11|² + |S21|² > 1 beyond tolerance.
    #[error("non-physical scattering: |S11|^2 + |S21|^2 = {total:.12} > 1")]
    NonPhysicalScattering { total: f64 },

    /// The data cannot constrain the requested parameters.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    /// Malformed input file.
    #[error("parse error in {path} (line {line}): {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Recognized file, unsupported variant (e.g. one-port Touchstone).
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    /// Duplicate frequency value in a trace.
    #[error("duplicate frequency {0} Hz in trace")]
    DuplicateFrequency(f64),

    /// Invalid manifest or synthesis configuration.
    #[error("config error: {0}")]
    Config(String),

    /// The self-consistent photon-number iteration failed to settle.
    #[error("fixed-point iteration diverged: {0}")]
    FixedPointDivergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable process exit code: 0 success, 1 usage/config, 2 data/parse,
    /// 3 fit non-convergence.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 1,
            Error::Parse { .. }
            | Error::UnsupportedFormat(_)
            | Error::DuplicateFrequency(_)
            | Error::InsufficientData(_)
            | Error::Domain(_)
            | Error::NonPhysicalScattering { .. }
            | Error::NegativeKineticInductance { .. }
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::NonConvergence(_)
            | Error::NoResonanceFound(_)
            | Error::DegenerateGeometry(_)
            | Error::IllConditioned(_)
            | Error::FixedPointDivergence(_) => 3,
        }
    }
}
