//! Crate-wide error and result types.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by validating constructors and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter lies outside its admissible interval.
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A vector or state that must carry unit norm does not.
    #[error("{what} is not normalized: |norm^2 - 1| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotNormalized {
        what: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    /// A matrix that must be unitary is not.
    #[error("{what} is not unitary: max |U*U - I| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotUnitary {
        what: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("cannot normalize a state with vanishing norm")]
    ZeroNorm,

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    /// Config problem not tied to a single line (e.g. missing keys).
    #[error("config: {0}")]
    ConfigInvalid(String),

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unknown coincidence event '{0}' (expected a pair of detectors out of Ah, Av, Bh, Bv)")]
    UnknownEvent(String),

    #[error("unknown objective '{0}' (expected max_cross_side_rate, max_min_bell_coefficient or target_balance)")]
    UnknownObjective(String),

    #[error("unknown sweep parameter '{0}' (expected r_sq, gamma, eps or eps_prime)")]
    UnknownSweepParameter(String),

    #[error("invalid sweep '{spec}': {message}")]
    InvalidSweep { spec: String, message: String },

    #[error("degenerate arrangement: {0}")]
    Degenerate(String),

    #[error("draw count must be at least 1")]
    NoDraws,

    #[error("creation polynomial degree would exceed two photons")]
    DegreeOverflow,

    #[error("{0}")]
    Unsupported(String),
}
