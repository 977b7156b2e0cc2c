//! Branching on short cycles, parameterized by `k = b - W(G)`.
//!
//! Deleting an edge `uv` on a cycle keeps the graph connected and raises
//! `W` by at least one (the pair `u, v` moves apart), so a cycle of length at
//! least `k + 3` already rules out every spanning tree. Otherwise one of at
//! most `k + 2` cycle edges is missing from any good tree and the search
//! branches on it, recomputing `k` at every node.

use rustc_hash::FxHashSet;

use crate::error::Result;
use crate::graph::{shortest_cycle, wiener_graph, Graph, SpanningTree};
use crate::{par, Solution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AboveOutcome {
    pub decision: bool,
    pub witness: Option<SpanningTree>,
    /// Search nodes visited.
    pub nodes: u64,
    /// Deepest recursion reached, counted in deleted edges.
    pub max_depth: u64,
}

struct Search<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    budget: u64,
    failed: FxHashSet<Vec<u64>>,
    nodes: u64,
    max_depth: u64,
}

impl Search<'_> {
    fn graph(&self, keep: &[u64]) -> Graph {
        let kept: Vec<(usize, usize)> = (0..self.edges.len())
            .filter(|&i| keep[i / 64] >> (i % 64) & 1 == 1)
            .map(|i| self.edges[i])
            .collect();
        Graph::from_edges(self.n, &kept).expect("subgraph of a valid graph")
    }

    /// Edge indices to branch on, or `Err(found)` when the node is decided.
    fn expand(&self, keep: &[u64]) -> std::result::Result<Vec<usize>, Option<SpanningTree>> {
        let h = self.graph(keep);
        let w = wiener_graph(&h).expect("cycle-edge deletions keep the graph connected");
        if w > self.budget {
            return Err(None);
        }
        if h.m() + 1 == self.n {
            return Err(Some(SpanningTree::from_tree_graph(&h).expect("connected with n - 1 edges")));
        }
        let k = self.budget - w;
        // every remaining deletion adds at least one
        if (h.m() + 1 - self.n) as u64 > k {
            return Err(None);
        }
        let (len, cycle) = shortest_cycle(&h).expect("not a tree");
        if len as u64 >= k + 3 {
            return Err(None);
        }
        let branch = (0..len)
            .map(|j| {
                let (a, b) = (cycle[j], cycle[(j + 1) % len]);
                let e = (a.min(b), a.max(b));
                self.edges.binary_search(&e).expect("cycle edges belong to the graph")
            })
            .collect();
        Ok(branch)
    }

    fn run(&mut self, keep: &mut Vec<u64>, depth: u64) -> Option<SpanningTree> {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
        if self.failed.contains(keep) {
            return None;
        }
        let branch = match self.expand(keep) {
            Ok(b) => b,
            Err(found) => {
                if found.is_none() {
                    self.failed.insert(keep.clone());
                }
                return found;
            }
        };
        for i in branch {
            keep[i / 64] ^= 1 << (i % 64);
            let found = self.run(keep, depth + 1);
            keep[i / 64] ^= 1 << (i % 64);
            if found.is_some() {
                return found;
            }
        }
        self.failed.insert(keep.clone());
        None
    }
}

/// Decides whether `g` has a spanning tree with `W <= budget`. The witness is
/// the first successful leaf in branching order, so it does not depend on
/// the thread schedule.
pub fn solve_above(g: &Graph, budget: u64) -> Result<AboveOutcome> {
    g.require_connected()?;
    let edges = g.edge_list();
    let mut keep = vec![0u64; edges.len().div_ceil(64)];
    for i in 0..edges.len() {
        keep[i / 64] |= 1 << (i % 64);
    }
    let fresh = || Search {
        n: g.n(),
        edges: &edges,
        budget,
        failed: FxHashSet::default(),
        nodes: 0,
        max_depth: 0,
    };
    let root = fresh();
    let branch = match root.expand(&keep) {
        Ok(b) => b,
        Err(witness) => {
            return Ok(AboveOutcome {
                decision: witness.is_some(),
                witness,
                nodes: 1,
                max_depth: 0,
            })
        }
    };
    let results = par::map(&branch, |&i| {
        let mut s = fresh();
        let mut keep = keep.clone();
        keep[i / 64] ^= 1 << (i % 64);
        let found = s.run(&mut keep, 1);
        (found, s.nodes, s.max_depth)
    });
    let nodes = 1 + results.iter().map(|r| r.1).sum::<u64>();
    let max_depth = results.iter().map(|r| r.2).max().unwrap_or(0);
    let witness = results.into_iter().find_map(|r| r.0);
    Ok(AboveOutcome {
        decision: witness.is_some(),
        witness,
        nodes,
        max_depth,
    })
}

/// Optimum by raising the budget from `W(g)` until the search succeeds;
/// `limit` caps the budget and yields `None` when exceeded.
pub fn above_optimum(g: &Graph, limit: Option<u64>) -> Result<Option<Solution>> {
    let floor = wiener_graph(g)?;
    let mut b = floor;
    loop {
        if limit.is_some_and(|l| b > l) {
            return Ok(None);
        }
        let out = solve_above(g, b)?;
        if let Some(t) = out.witness {
            return Ok(Some(Solution {
                wiener: t.wiener(),
                tree: Some(t),
            }));
        }
        b += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::mad_tree_bruteforce;

    #[test]
    fn cycle_examples() {
        let c4 = Graph::cycle(4);
        let yes = solve_above(&c4, 10).unwrap();
        assert!(yes.decision);
        assert_eq!(yes.witness.unwrap().wiener(), 10);
        let no = solve_above(&c4, 9).unwrap();
        assert!(!no.decision && no.witness.is_none());
        assert_eq!(no.max_depth, 0);
        assert!(!solve_above(&c4, 7).unwrap().decision);
    }

    #[test]
    fn tree_is_its_own_witness() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]).unwrap();
        let w = wiener_graph(&g).unwrap();
        let out = solve_above(&g, w).unwrap();
        assert!(out.decision);
        assert_eq!(out.witness.unwrap().as_graph(), g);
        assert!(!solve_above(&g, w - 1).unwrap().decision);
    }

    #[test]
    fn rejects_disconnected_graphs() {
        assert!(solve_above(&Graph::empty(2), 5).is_err());
    }

    #[test]
    fn matches_oracle_around_the_optimum() {
        for seed in 0..40 {
            let n = 5 + seed as usize % 4;
            let g = crate::gen::gen_random_connected(n, 0.4, 900 + seed).unwrap();
            let (_, opt) = mad_tree_bruteforce(&g).unwrap();
            let floor = wiener_graph(&g).unwrap();
            for b in [opt.saturating_sub(2), opt.saturating_sub(1), opt, opt + 1, opt + 3] {
                let out = solve_above(&g, b).unwrap();
                assert_eq!(out.decision, opt <= b, "seed {seed} b {b}");
                assert!(out.max_depth <= b.saturating_sub(floor));
                if let Some(t) = out.witness {
                    assert!(t.wiener() <= b);
                }
            }
            assert_eq!(above_optimum(&g, None).unwrap().unwrap().wiener, opt);
        }
    }

    #[test]
    fn optimum_respects_limit() {
        assert_eq!(above_optimum(&Graph::cycle(4), Some(9)).unwrap(), None);
        assert_eq!(above_optimum(&Graph::complete(4), None).unwrap().unwrap().wiener, 9);
    }
}
