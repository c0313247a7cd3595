//! Locally checkable labelings on Δ-regular trees: classification by the
//! fullness and greediness conditions, toast decompositions, solvers, the
//! adversarial constructions against online solvers, and homomorphism
//! problems.

pub mod adversary;
pub mod classify;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod homproblems;
pub mod io;
pub mod lcl;
pub mod par;
pub mod random;
pub mod solve;
pub mod toast;
pub mod treesolve;

pub use coloring::{verify_coloring, verify_coloring_within, Coloring, ColoringViolation, Verdict};
pub use error::{Error, Result};
pub use graph::{build_path, build_star, EdgeId, EdgeRecord, Ends, GraphBuilder, HalfEdgeGraph, VertexId};
pub use lcl::{Label, LabelMultiset, Lcl};
pub use par::Exec;
