//! Error type shared by every module.

use thiserror::Error;

/// Library-wide error enumeration.
///
/// Variants map onto the CLI exit-code contract: construction and plan
/// problems are configuration errors (exit 2), [`Error::GridResolution`]
/// is a resolution error (exit 3), everything else surfaces as a failed
/// check (exit 1) or plain error.
#[derive(Debug, Error)]
pub enum Error {
    /// Physical or grid parameters violate a construction invariant.
    #[error("invalid parameter: {0}")]
    InvalidSpec(String),

    /// An index (polynomial order, Fock level, dimension) is outside the
    /// supported range.
    #[error("{what} = {value} outside supported range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    /// The grid cannot resolve the requested state; the message names the
    /// violated bound.
    #[error("grid resolution inadequate: {0}")]
    GridResolution(String),

    /// A coefficient function left its required domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller picked the wrong of two algorithmic branches
    /// (scale-chirp path vs. integral-kernel path, or a log/sqrt branch cut).
    #[error("wrong branch: {0}")]
    WrongBranch(String),

    /// Operands live on different grids.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A propagation plan violates one of its sanity bounds.
    #[error("invalid propagation plan: {0}")]
    InvalidPlan(String),

    /// A phase-space grid or wavefunction leaks probability past its edges.
    #[error("truncated support: {0}")]
    TruncatedSupport(String),

    /// Degenerate operator parameters (vanishing denominator).
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// An internal numerical self-check failed.
    #[error("numerical check failed: {0}")]
    NumericalCheck(String),

    /// Filesystem or serialization problem.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
