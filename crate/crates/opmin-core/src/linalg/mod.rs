//! Z/2-graded exact linear algebra over the rationals.
//!
//! The two workhorse types are [`GradedMap`] (a sparse matrix between based
//! graded spaces, carrying a parity) and [`MultiMap`] (a multilinear map
//! between tensor powers of based spaces). All sign bookkeeping follows one
//! Koszul convention, fixed once:
//!
//! ```text
//! (f ⊗ g)(a ⊗ b) = (-1)^{|g||a|} f(a) ⊗ g(b)
//! ```
//!
//! and every other sign in the crate is derived from it.

mod scalar;
mod space;
mod map;
mod multi;
mod rref;

pub use scalar::{scalar, Scalar};
pub use space::{GradedSpace, Parity, Vector};
pub use map::GradedMap;
pub use multi::{koszul_perm_sign, MultiMap, Word};
pub use rref::{solve, RrefResult};

use thiserror::Error;

/// Errors raised by graded linear algebra constructions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parity violation: entry ({out}, {inp}) breaks the declared parity")]
    ParityViolation { out: String, inp: String },
    #[error("unknown basis vector `{0}`")]
    UnknownBasis(String),
    #[error("duplicate basis name `{0}`")]
    DuplicateBasis(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("empty tensor list")]
    EmptyTensor,
    #[error("matrix is singular")]
    Singular,
}

pub type Result<T> = std::result::Result<T, LinError>;
