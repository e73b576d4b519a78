//! cckit — a calculus of combinatorial cell complexes.
//!
//! Complexes here are finite families of vertex subsets with a rank
//! function satisfying four axioms (monotone rank, intersection closure,
//! no rank gaps, the diamond property). On top of the validated data model
//! the crate provides:
//!
//! - structural predicates and classification ([`classify`]),
//! - duality on closed complexes, ∼-duals and dual graphs ([`duality`]),
//! - barycentric subdivision and reconstruction from its oriented
//!   1-skeleton ([`subdivision`]),
//! - the connection, covariant edge fields and the reconstruction of an
//!   ambient complex from a 2-skeleton ([`reconstruct`]),
//! - Euler characteristic, shellings and 2-shellings ([`shell`]),
//! - cobordisms, midsections and the duality map on cobordisms
//!   ([`cobordism`]),
//! - reductions, collapses, transitions, slices and their sequences,
//!   boundary pull-backs and unions ([`causal`]),
//! - the braket category of causal cobordisms with its C/T/P functors
//!   ([`braket`]),
//! - JSON documents, generators and the `cckit` CLI ([`toolkit`]).

pub mod braket;
pub mod causal;
pub mod cell;
pub mod classify;
pub mod cobordism;
pub mod complex;
pub mod duality;
pub mod iso;
pub mod reconstruct;
pub mod shell;
pub mod subdivision;
pub mod toolkit;

pub use cell::{Cell, VertexId};
pub use complex::{build_complex, CellComplex};
