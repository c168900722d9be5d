//! Aggregation-based algebraic multigrid with learned corrections.
//!
//! The crate builds AGG, SA and sparsified SA hierarchies from a sparse
//! matrix alone, refines AGG hierarchies with a small graph network, solves
//! with V-cycles or V-cycle-preconditioned flexible GMRES(2), generates the
//! benchmark problem families and exports training data.

pub mod amg;
pub mod cli;
pub mod error;
pub mod gnn;
pub mod manifest;
pub mod problems;
pub mod solve;
pub mod sparse;
pub mod train;

pub use amg::{build_hierarchy, CoarseSolver, Hierarchy, SetupConfig, Variant};
pub use error::{Error, Result};
pub use sparse::SparseMatrix;
