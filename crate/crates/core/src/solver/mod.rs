//! Maximum independent set: brute force, branch and bound with coloring bounds,
//! local search, and a clique-cover upper bound.

mod bnb;
mod brute;
mod cover;
mod local;

pub use bnb::{max_independent_set, max_independent_set_parallel};
pub use brute::{brute_force_mis, BRUTE_FORCE_LIMIT};
pub use cover::{clique_cover, clique_cover_upper_bound};
pub use local::{local_search_lower_bound, LOCAL_SEARCH_MAX_ORDER};

use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MisStatus {
    /// `size` is the independence number.
    Exact,
    /// `size` is a lower bound only.
    LowerBound,
    /// Search proved `alpha <= certified_upper` without reaching it.
    UpperBoundCertified,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MisResult {
    /// Sorted vertex indices of an independent set.
    pub members: Vec<usize>,
    pub size: usize,
    pub status: MisStatus,
    pub certified_upper: Option<usize>,
    pub search_nodes: u64,
    pub elapsed: Duration,
}

impl MisResult {
    pub fn is_exact(&self) -> bool {
        self.status == MisStatus::Exact
    }
}

/// Limits for a search. All fields optional; an empty budget runs to completion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverBudget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
    /// Stop once a set of this size is found, or once `alpha < target` is proved.
    pub target: Option<usize>,
}

impl SolverBudget {
    pub fn unlimited() -> Self {
        SolverBudget::default()
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.max_nodes = Some(nodes);
        self
    }

    pub fn with_time(mut self, t: Duration) -> Self {
        self.max_time = Some(t);
        self
    }

    pub fn with_target(mut self, target: usize) -> Self {
        self.target = Some(target);
        self
    }
}
