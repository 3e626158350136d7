//! Exact vertex algebroids attached to commuting frames, their 1-truncated vertex
//! algebra operations, and differences of two of them as exact Courant algebroids.

mod axioms;
mod difference;
mod frame;
mod ops;
mod truncated;

pub use axioms::{check_vertex_axioms, VertexAlgebroid, VertexAxiom, VertexAxiomResult, VertexReport};
pub use difference::{eva_difference, EvaDifference, PairClass};
pub use frame::{FrameEVA, VertexElement};
pub use ops::{eva_bracket, eva_pairing, star};
pub use truncated::{
    check_truncated_axioms, truncated_ops, Graded, OpKind, TruncatedAxiom, TruncatedFailure, TruncatedReport,
    TruncatedView,
};
