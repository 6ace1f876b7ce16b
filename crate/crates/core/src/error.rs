//! Error taxonomy for the engine.
//!
//! Everything that can go wrong falls into two broad families: the caller
//! handed us something outside the supported problem class (domain errors,
//! malformed configs, unsupported crossing topologies), or a numerical
//! procedure could not reach its target tolerance (eigensolver stagnation,
//! step budgets, quadrature failure). The CLI maps the former to exit code 2
//! and the latter to exit code 3.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A spectrum was degenerate where simple eigenvalues are required
    /// (for example at the endpoints of the time interval).
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// The Jacobi eigensolver did not reach its off-diagonal target.
    #[error("eigensolver non-convergence: off-diagonal residual {residual:.3e} after {sweeps} sweeps")]
    EigNonConvergence { residual: f64, sweeps: usize },

    /// The propagator hit its step budget before meeting the error target.
    /// Carries the best error estimate achieved so the caller can decide
    /// whether the partial accuracy is good enough.
    #[error("step budget exhausted after {steps} steps: best error estimate {best_error:.3e}")]
    StepBudget { steps: u64, best_error: f64 },

    /// A gap minimum escaped its declared search window.
    #[error("window error: {0}")]
    Window(String),

    /// A crossing failed the transversality certification.
    #[error("transversality violation: {0}")]
    Transversality(String),

    /// The crossing pattern is outside the supported class
    /// (triple degeneracies, overlapping windows, interrupted cycles, ...).
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Adaptive quadrature failed to meet its absolute tolerance.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// A structural precondition on a graph or cycle was violated.
    #[error("structural error: {0}")]
    Structure(String),

    /// Malformed run configuration.
    #[error("config error: {0}")]
    Config(String),

    /// An output file could not be written.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
