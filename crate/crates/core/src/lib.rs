//! Classification of 3-dimensional lattices up to isometry and similarity.
//!
//! Every lattice in 3-space is spanned by four vectors `v0, v1, v2, v3`
//! summing to zero whose pairwise scalar products are all non-positive —
//! an *obtuse superbase* (Selling 1874; Delone 1937; Conway & Sloane 1992).
//! This crate
//!
//! * reduces an arbitrary basis to an obtuse superbase ([`reduction`]),
//! * reads off the six conorms `p_ij = -v_i · v_j` and seven vonorms
//!   (squared lengths of the partial sums) with their Fano-plane algebra
//!   ([`superbase`]),
//! * classifies the lattice's Voronoi domain into one of the five
//!   combinatorial types `V1..V5` from the pattern of zero conorms and
//!   canonically orders the square roots of the conorms into the *root
//!   invariant* ([`invariant`]) — a complete invariant: lattices are
//!   isometric exactly when their root invariants agree, and similar
//!   exactly when the invariants are proportional,
//! * rebuilds an explicit superbase from a root invariant
//!   ([`reconstruct`]),
//! * and cross-checks the structure theory by brute force at small scale
//!   ([`oracle`]): Voronoi vectors as shortest 2Λ-class representatives,
//!   exhaustive enumeration of all obtuse superbases, and the
//!   seven-neighbour distance vector that fails to separate a certain
//!   two-parameter pair of lattice families.

pub mod error;
pub mod invariant;
pub mod linalg;
pub mod oracle;
pub mod reconstruct;
pub mod reduction;
pub mod superbase;

pub use error::{Error, Result};
pub use invariant::{
    classify, isometric, root_form, root_invariant, similar, RootForm, RootInvariant, VoronoiType,
};
pub use linalg::{Basis3, CellParams, Mat3, Vec3};
pub use reduction::{reduce_to_obtuse, ReductionTrace};
pub use superbase::{CoForm, IndexPermutation, Superbase, VoForm};
