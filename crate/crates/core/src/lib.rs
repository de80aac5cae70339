//! Maximum weight independent set / minimum weight vertex cover toolkit.
//!
//! - [`graph`]: mutable weighted graph with an undo journal and a reduction trace
//! - [`subsolve`]: exact solver for small induced subgraphs
//! - [`cit`]: confining / covering conflict analyses and their inferred variants
//! - [`reduce`]: kernelization pipeline
//! - [`solver`]: exact branch-and-reduce with weight packing constraints
//! - [`localsearch`]: vertex cover local search
//! - [`io`], [`weights`], [`generate`], [`verify`], [`bench`]: plumbing

pub mod bench;
pub mod cit;
pub mod generate;
pub mod graph;
pub mod io;
pub mod localsearch;
pub mod reduce;
pub mod solver;
pub mod subsolve;
pub mod verify;
pub mod weights;

pub use graph::{GraphError, ReductionEvent, ReductionTrace, VertexId, Weight, WeightedGraph};
