//! Exact solvers for minimum-Wiener-index spanning trees (MAD trees).
//!
//! The crate bundles four parameterized algorithms, each exact on its own
//! parameter family, together with a brute-force oracle used to cross-check
//! them and generators for test and hardness instances:
//!
//! * [`modular`]: branching over quotient spanning trees of a minimum modular
//!   partition, building poly-star candidates.
//! * [`treewidth`]: dynamic programming over a nice tree decomposition.
//! * [`integrity`]: separator enumeration plus exhaustive extension counting,
//!   parameterized by vertex integrity.
//! * [`above`]: cycle-edge branching parameterized by `b - W(G)`.
//!
//! Solvers run in parallel through rayon when the `parallel` feature is on
//! (default) and fall back to sequential loops otherwise. Results do not
//! depend on the schedule.

pub mod above;
pub mod error;
pub mod gen;
pub mod graph;
pub mod integrity;
pub mod io;
pub mod modular;
pub mod oracle;
mod par;
pub mod treewidth;
mod util;

pub use error::{Error, Result};
pub use graph::{
    bfs_distances, edge_contribution, is_induced_path, median_vertices, shortest_cycle,
    wiener_graph, wiener_tree, DistanceProfile, Graph, SpanningTree,
};

/// Outcome of an optimizing solver: the optimum Wiener index, the budget
/// decision, and a witness tree when the solver produces one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub wiener: u64,
    pub tree: Option<SpanningTree>,
}

impl Solution {
    pub fn within(&self, budget: u64) -> bool {
        self.wiener <= budget
    }
}
