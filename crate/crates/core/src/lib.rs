//! Strong graph powers, random jump-graph constructions and independence-series
//! experiments.
//!
//! The independence series of `G` is `a_k = alpha(G^k)^(1/k)` where `G^k` is the
//! `k`-fold strong power. This crate builds graphs whose series stays near
//! `log N` for `k < nu` and then jumps to at least `N^(1/nu)`, and provides the
//! exact, certified and heuristic machinery to observe this at desk scale.

pub mod analysis;
mod bits;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{Graph, MaterializationCap, PowerGraphView, TupleVertex, VertexId};
