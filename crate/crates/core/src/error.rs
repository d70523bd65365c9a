//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, FlameError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlameError {
    #[error("invalid grid: nx = {nx} (must be even and >= 8)")]
    InvalidGrid { nx: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("degenerate front: mean of cos(theta) is {mean_cos:.3e}, curve cannot close one horizontal period")]
    DegenerateFront { mean_cos: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("root not found: {0}")]
    RootNotFound(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("no convergence after {iterations} iterations (last residual {last_residual:.3e})")]
    NoConvergence {
        iterations: usize,
        last_residual: f64,
        history: Vec<f64>,
        last_iterate: Vec<f64>,
    },

    #[error("singular linear system (smallest pivot {pivot:.3e})")]
    SingularSystem { pivot: f64 },

    #[error("branch could not start: {0}")]
    BranchStart(Box<FlameError>),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("evolution blew up at t = {time} (max |theta| = {max_theta:.3e})")]
    BlowUp { time: f64, max_theta: f64 },
}
