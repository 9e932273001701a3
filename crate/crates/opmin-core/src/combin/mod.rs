//! Combinatorial index sets for amplitude sums: reduced planar rooted trees,
//! leaf-labelled abstract trees, two-colored trees, and stable genus-labelled
//! graphs. Every enumerator returns canonical forms in a deterministic order.

mod planar;
mod labelled;
mod bv;
mod graph;

pub use planar::{enum_planar, PlanarTree};
pub use labelled::{enum_labelled, set_partitions, LabelledTree};
pub use bv::{enum_bvtrees, BvChild, BvNode, BvTree, EdgeColor};
pub use graph::{contract_edge, enum_stable_graphs, ContractionKind, StableGraph};
