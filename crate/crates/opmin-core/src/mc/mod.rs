//! Maurer-Cartan theory in nilpotent dg Lie algebras: the master equation,
//! gauge action, polynomial one-parameter families, path-ordered
//! exponentials, and two explicit operator-level homotopies.

mod lie;
mod pexp;
mod opz;

pub use lie::{
    check_mc, gauge, sullivan_from_gauge, MCElement, McError, NilpotentDgLie, PolyPath,
};
pub use pexp::{
    free_tensor_model, grouplike_check, path_ordered_exp, solve_transport_ode, Assoc,
};
pub use opz::{verify_bvhat_homotopy, verify_dual_gauge_homotopy, OperatorDz, OperatorPoly};
