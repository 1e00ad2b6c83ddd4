//! Exact toolkit for polytopes of subgraph statistics.
//!
//! The crate builds the convex hulls of subgraph-density vectors over all
//! labeled graphs on a few vertices, and the bodies inscribed in them: spines
//! (generalized moment curves), cyclic polytopes, curvy zonotopes of
//! stepfunction kernels, and the tail curve of complete-graph densities. All
//! geometry is carried out in exact rational arithmetic.

pub mod certificates;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod limits;
pub mod rational;
pub mod report;
pub mod spine;
pub mod statistics;
pub mod zonotope;

pub use error::{Error, Result};
