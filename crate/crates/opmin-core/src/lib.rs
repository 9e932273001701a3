//! Exact-arithmetic engine for homotopy-algebraic computations over the rationals:
//! Z/2-graded linear algebra with Koszul signs, Hodge decompositions, tree and
//! graph enumeration, homotopy transfer of A-infinity / L-infinity structures,
//! two-colored tree complexes, Maurer-Cartan theory in nilpotent dg Lie algebras,
//! and graph-amplitude cocycles built from contractible Frobenius data.
//!
//! Everything is computed over arbitrary-precision rationals; every check in the
//! library is an exact identity, never a tolerance.

pub mod linalg;
pub mod hodge;
pub mod combin;
pub mod bvcomplex;
pub mod transfer;
pub mod mc;
pub mod dual;
pub mod corpus;
pub mod report;

pub(crate) mod par;

pub use linalg::{GradedMap, GradedSpace, MultiMap, Parity, Scalar, Vector};
