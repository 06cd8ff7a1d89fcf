//! Simultaneous edge-colouring of graph collections.
//!
//! A collection `G_1, ..., G_k` on a shared vertex set is coloured
//! simultaneously when the colouring restricted to every `G_i` is proper.
//! The crate provides exact solvers for the simultaneous (list) chromatic
//! index, exact fractional matchings of hypergraphs, the extremal
//! constructions behind the known lower bounds, and a randomized list
//! sparsification pipeline whose every output is validated.

pub mod cli;
pub mod constructions;
pub mod exact_color;
pub mod fraclp;
pub mod graph_core;
pub mod sparsifier;

pub use exact_color::{Budget, ListOutcome, SolveReport};
pub use fraclp::Rational;
pub use graph_core::{
    ColouringCertificate, GraphCollection, ListAssignment, Multihypergraph, Profile, SimpleGraph,
    Verdict,
};
