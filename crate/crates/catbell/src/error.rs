//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The Fock cutoff lost more probability than the builder's tolerance
    /// allows. Grow `n_max` instead of silently renormalizing.
    #[error(
        "truncation too small: captured norm {captured:.17} < 1 - {tolerance:e} \
         at n_max = {n_max} (increase n_max)"
    )]
    TruncationTooSmall {
        captured: f64,
        tolerance: f64,
        n_max: usize,
    },

    /// A superposition whose branches coincide (e.g. the Bell cat at
    /// α = β = 0) has a divergent normalization and is rejected.
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// Probability mass reaches the edge of the grid.
    #[error(
        "grid too small: boundary density {boundary:.3e} exceeds {limit:e} \
         on [{min}, {max}] (enlarge the grid)"
    )]
    GridTooSmall { boundary: f64, limit: f64, min: f64, max: f64 },

    /// A grid specification that violates its own invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A scenario configuration that cannot be run, with the reason.
    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
