//! Finite quivers: path counting, the optimal k-path bound with a certified
//! reshaping pipeline, hereditary/saturated structure, path algebras and
//! Leavitt path algebras.
//!
//! A *loop* throughout this crate is a directed cycle of any length, not only
//! a self-loop.

pub mod adjacency;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod leavitt;
pub mod linalg;
pub mod path_algebra;
pub mod scalar;
pub mod structure;

pub use adjacency::CountMatrix;
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, Path, VertexId};
pub use scalar::{Gf, Scalar};
