use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("n must be positive, got 0")]
    ZeroIndex,

    #[error("integer overflow reconstructing {0} (product exceeds 64 bits)")]
    Overflow(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid of {nodes} nodes exceeds the {budget} node budget; use qmc_integral for high dimension")]
    GridBudget { nodes: u128, budget: u64 },

    #[error("Gram matrix is not positive definite (degenerate weight): pivot {pivot} at row {row}")]
    DegenerateWeight { row: usize, pivot: f64 },

    #[error("candidate is not outer (gamma = {gamma:.6e}, tol = {tol:.1e})")]
    NotOuter { gamma: f64, tol: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
