//! Crate-wide error type.

use thiserror::Error;

use crate::reduction::ReductionTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Cell parameters or an angle triple that no parallelepiped realizes.
    #[error("unrealizable cell parameters: {0}")]
    Realizability(String),

    /// Basis vectors with zero (or numerically vanishing) cell volume.
    #[error("degenerate basis: |det| = {det:e} is too small relative to the vector lengths")]
    DegenerateBasis { det: f64 },

    /// Seven vonorms that violate the sum identity
    /// `sq0 + sq1 + sq2 + sq3 = sq01 + sq02 + sq03`.
    #[error(
        "inconsistent vonorms: sum identity defect {defect:e} exceeds tolerance at scale {scale:e}"
    )]
    InconsistentVoForm { defect: f64, scale: f64 },

    /// A reduction step was asked to act on a repeated index.
    #[error("reduction step requires two distinct indices, got ({0}, {0})")]
    SameIndex(usize),

    /// The reduction loop hit its iteration cap. Carries the partial trace.
    #[error("reduction did not reach an obtuse superbase within {max_iters} steps")]
    NonTermination {
        max_iters: usize,
        trace: ReductionTrace,
    },

    /// A conorm is negative beyond tolerance where an obtuse coform is required.
    #[error("coform is not obtuse: {slot} = {value:e} is below -{tol:e}")]
    NotObtuse {
        slot: &'static str,
        value: f64,
        tol: f64,
    },

    /// A zero-conorm pattern no nondegenerate lattice can produce.
    #[error("degenerate zero-conorm pattern ({zeros} zeros)")]
    DegenerateLattice { zeros: usize },

    /// Root-form zero pattern does not match the requested Voronoi type.
    #[error("zero pattern of the root form does not match Voronoi type {expected}")]
    TypePatternMismatch { expected: &'static str },

    /// A root-invariant tuple with the wrong arity, a negative entry, or
    /// a non-finite entry.
    #[error("malformed invariant tuple: {0}")]
    InvalidInvariant(String),

    /// A coform whose Gram matrix is not positive definite, so no lattice
    /// realizes it.
    #[error("invariant is not realizable: Gram matrix is not positive definite")]
    NotRealizable,

    /// A brute-force minimizer touched the coefficient window boundary;
    /// enlarge the window and retry.
    #[error("search window +-{bound} too small: a minimizer lies on the boundary")]
    WindowTooSmall { bound: i64 },

    /// A negative entry where a non-negative shift is required.
    #[error("negative conorm shift {0} (all shifts must be >= 0)")]
    NegativeShift(f64),
}
