use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the range where the requested quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("sharp constant unknown for gamma = {gamma}, d = {dim}")]
    SharpConstantUnknown { gamma: f64, dim: usize },

    /// Malformed input file or inconsistent sizes.
    #[error("format error: {0}")]
    Format(String),

    #[error("eigensolver did not converge after {iterations} sweeps ({deflated} of {size} eigenvalues deflated)")]
    NoConvergence {
        iterations: usize,
        deflated: usize,
        size: usize,
    },

    /// A caller-side contract was violated (asymmetric input, missing eigenvectors, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("continuation failed at Im V0 = {last_good_im}: {reason}")]
    Continuation { last_good_im: f64, reason: String },

    #[error("invalid request: {0}")]
    Request(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
