//! Graph grammars on labeled half-edge graphs, insertion pre-Lie products and Feynman graph
//! generation.

pub mod canonical;
pub mod embed;
pub mod feynman;
pub mod grammar;
pub mod graph;
pub mod io;
pub mod liealg;

pub use canonical::{are_isomorphic, canonical_code, CanonicalCode};
pub use graph::{Direction, Graph, GraphBuilder, GraphError, LabelAlphabet};
