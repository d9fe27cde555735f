//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by digit-analysis operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input value outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation that needs at least one observation received none.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A density failed its normalization precondition.
    #[error("normalization error: {what} integrates to {measured}, expected 1 within {tol}")]
    Normalization {
        what: String,
        measured: f64,
        tol: f64,
    },

    /// Truncating an integral to a finite decade range lost too much mass.
    #[error(
        "truncation error: {lost:.3e} of the density mass lies outside decades [{low}, {high}]"
    )]
    Truncation { lost: f64, low: i32, high: i32 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge: requested {requested:.3e}, achieved {achieved:.3e}")]
    Convergence { requested: f64, achieved: f64 },

    /// A profile is not differentiable where a derivative was requested.
    #[error("profile has a jump or kink at phase {at}: {what}")]
    NotDifferentiable { at: f64, what: String },

    /// A root finder exhausted its iteration budget.
    #[error("solver did not converge after {iterations} iterations (bracket [{low}, {high}], residual {residual:.3e})")]
    NoConvergence {
        iterations: usize,
        low: f64,
        high: f64,
        residual: f64,
    },

    /// A tabulated target failed validation (monotonicity, endpoints).
    #[error("validation error: {0}")]
    Validation(String),

    /// The discretization grid cannot represent the problem.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Parameters describe a window with no probability mass.
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
