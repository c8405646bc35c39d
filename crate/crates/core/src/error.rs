//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building models or evaluating potentials.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An atom model violated a construction invariant (no transitions,
    /// non-positive transition wavenumber, negative weight, ...).
    #[error("invalid atom model: {0}")]
    InvalidAtom(String),

    /// A real-axis polarizability was requested at an undamped resonance.
    #[error("polarizability evaluated within {tolerance} of the undamped resonance at k = {k_resonance} (k = {k}); set a damping width or move off resonance")]
    ResonanceSingularity {
        k: f64,
        k_resonance: f64,
        tolerance: f64,
    },

    /// A real-axis quadrature path needs a pole prescription, i.e. a strictly
    /// positive damping width on both atoms.
    #[error("real-axis integration requires damping > 0 on both atoms ({0}); use a small width or an imaginary-axis method")]
    ResonanceHandling(String),

    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration value (geometry, bath, options) is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// The quadrature or summation engine could not reach its target within
    /// its budget. Carries the last two extrapolants for diagnosis.
    #[error("quadrature failed to converge: {context} (last extrapolants {last:?}, error estimate {estimate:e})")]
    NonConvergence {
        context: String,
        last: [f64; 2],
        estimate: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
