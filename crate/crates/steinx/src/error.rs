//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Result`]. Variants carry
//! enough context (offending cell, residual, iteration count) to diagnose a
//! bad input without re-running the computation.

use thiserror::Error;

/// Errors produced by validation, solvers, schemes and the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Entries of a probability vector must be nonnegative.
    #[error("{what}: entry {index} is negative ({value})")]
    NegativeEntry {
        what: &'static str,
        index: usize,
        value: f64,
    },

    /// A probability vector must sum to 1 within `1e-12` before renormalization.
    #[error("{what}: entries sum to {sum}, not 1 (tolerance 1e-12)")]
    NotNormalized { what: &'static str, sum: f64 },

    /// Two objects that must share a shape do not.
    #[error("shape mismatch in {op}: {expected} vs {got}")]
    ShapeMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    /// KL divergence is infinite: `p` puts mass where `q` has none.
    #[error("KL divergence undefined: q[{index}] = 0 but p[{index}] = {p_val} > 0")]
    AbsoluteContinuityViolation { index: usize, p_val: f64 },

    /// The alternative joint distribution must be strictly positive.
    #[error("Q_UV must be strictly positive, but Q[{u}][{v}] = 0")]
    SupportAssumptionViolation { u: usize, v: usize },

    /// A channel output that no input can produce.
    #[error("degenerate channel: output {output} has zero probability under every input")]
    DegenerateChannel { output: usize },

    /// Operation requires a strictly positive transition matrix.
    #[error("channel is not fully connected: transition[{input}][{output}] = 0")]
    NotFullyConnected { input: usize, output: usize },

    /// Type enumeration would exceed the configured cap.
    #[error("type enumeration needs about {required:.3e} types, above the cap of {cap}")]
    ResourceLimit { required: f64, cap: u64 },

    /// Iterative solver did not reach its tolerance within the iteration cap.
    #[error("solver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { iterations: usize, residual: f64 },

    /// Marginal targets that no joint distribution can satisfy.
    #[error("infeasible marginal targets: {detail}")]
    InfeasibleTargets { detail: String },

    /// An operation was applied to a scheme instance of the wrong regime.
    #[error("operation `{op}` does not apply to regime {regime}")]
    RegimeMismatch { op: &'static str, regime: String },

    /// A resource schedule failed its sanity checks.
    #[error("schedule violation: {detail}")]
    ScheduleViolation { detail: String },

    /// Too few data points for a requested fit.
    #[error("insufficient data: need at least {needed} finite points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// A cost function that breaks the free-symbol assumptions.
    #[error("invalid cost function: {detail}")]
    InvalidCost { detail: String },

    /// A malformed problem configuration.
    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
