//! MAD trees for graphs of small vertex integrity.
//!
//! With a separator `S` whose removal leaves small components, a spanning
//! tree restricted to `S` and the few components joining its pieces is one of
//! boundedly many candidate trees `T_S`. The other components each hang off
//! `T_S` in one of boundedly many ways, and components of one type are
//! interchangeable, so only the number of components of each type using each
//! attachment matters. Those counts are found by exhaustive search.
//!
//! Two distinct components with attachment classes `a != b` contribute
//! `x_a x_b D(a, b)` to the Wiener index, and pairs within one class
//! contribute `C(x_a, 2) D(a, a)`.

mod extend;
mod iqp;
mod types;

pub use extend::{
    connectors_of, enumerate_candidate_trees, extension_constants, extensions_of, CandidateTree, Connector,
    Extension, ExtensionConstants, Piece,
};
pub use iqp::{assignment_cost, solve_extension_counts, DEFAULT_STATE_LIMIT};
pub use types::{classify_components, vi_witness, ComponentType, ViWitness, MAX_COMPONENT, MAX_VI_N};

use crate::error::Result;
use crate::graph::{Graph, SpanningTree};
use crate::oracle::mad_tree_bruteforce;
use crate::par;

/// Default cap on candidate trees per instance.
pub const DEFAULT_CANDIDATE_LIMIT: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViOptions {
    pub candidate_limit: usize,
    pub state_limit: u64,
}

impl Default for ViOptions {
    fn default() -> Self {
        ViOptions {
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViSolution {
    pub wiener: u64,
    pub tree: SpanningTree,
    pub decision: Option<bool>,
    pub witness: ViWitness,
    pub candidates: usize,
}

/// Builds the spanning tree given by a candidate and a count assignment.
/// Components of a type are handed their extensions in member order.
pub fn materialize(
    g: &Graph,
    types: &[ComponentType],
    extensions: &[Vec<Extension>],
    tree: &CandidateTree,
    counts: &[Vec<u64>],
) -> Result<SpanningTree> {
    let mut edges = tree.edges.clone();
    for (t, ty) in types.iter().enumerate() {
        let mut members = ty.members[tree.used[t]..].iter();
        for (e, &x) in extensions[t].iter().zip(&counts[t]) {
            for _ in 0..x {
                let m = members.next().expect("counts match the remaining members");
                edges.extend(e.internal.iter().map(|&(a, b)| (m[a], m[b])));
                edges.extend(e.crossing.iter().map(|&(v, s)| (m[v], s)));
            }
        }
    }
    SpanningTree::new(g, edges)
}

pub fn solve_vertex_integrity(g: &Graph, budget: Option<u64>) -> Result<ViSolution> {
    solve_vertex_integrity_with(g, budget, ViOptions::default())
}

/// Exact optimum: the best over all candidate trees of `W(T_S)` plus the
/// optimal attachment of the remaining components. Ties go to the smaller
/// edge list.
pub fn solve_vertex_integrity_with(g: &Graph, budget: Option<u64>, opts: ViOptions) -> Result<ViSolution> {
    let witness = vi_witness(g)?;
    if witness.s.is_empty() {
        // one component: the whole graph has at most k vertices
        let (tree, wiener) = mad_tree_bruteforce(g)?;
        return Ok(ViSolution {
            wiener,
            tree,
            decision: budget.map(|b| wiener <= b),
            witness,
            candidates: 1,
        });
    }
    let s = &witness.s;
    let types = classify_components(g, s)?;
    let extensions: Vec<Vec<Extension>> = types.iter().map(|t| extensions_of(g, s, t)).collect();
    let candidates = enumerate_candidate_trees(g, s, &types, opts.candidate_limit)?;
    let results = par::map(&candidates, |cand| -> Result<(u64, SpanningTree)> {
        let constants = extension_constants(g, s, &types, &extensions, cand);
        let (counts, cost) = solve_extension_counts(&constants, opts.state_limit)?;
        let tree = materialize(g, &types, &extensions, cand, &counts)?;
        Ok((cand.wiener() + cost, tree))
    });
    let mut best: Option<(u64, SpanningTree)> = None;
    for r in results {
        let (w, t) = r?;
        if best.as_ref().map_or(true, |b| (w, t.edges()) < (b.0, b.1.edges())) {
            best = Some((w, t));
        }
    }
    let (wiener, tree) = best.expect("a connected graph has a candidate tree");
    Ok(ViSolution {
        wiener,
        tree,
        decision: budget.map(|b| wiener <= b),
        candidates: candidates.len(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::gen_random_connected;

    #[test]
    fn solver_examples() {
        let s = solve_vertex_integrity(&Graph::star(5), Some(16)).unwrap();
        assert_eq!((s.wiener, s.decision), (16, Some(true)));
        let s = solve_vertex_integrity(&Graph::cycle(4), Some(10)).unwrap();
        assert_eq!((s.wiener, s.decision), (10, Some(true)));
        let s = solve_vertex_integrity(&Graph::complete(4), Some(8)).unwrap();
        assert_eq!((s.wiener, s.decision), (9, Some(false)));
        assert!(solve_vertex_integrity(&Graph::empty(2), None).is_err());
    }

    #[test]
    fn witness_tree_matches_reported_value() {
        for seed in 0..30 {
            let g = gen_random_connected(8, 0.35, 40 + seed).unwrap();
            let s = solve_vertex_integrity(&g, None).unwrap();
            assert_eq!(s.tree.wiener(), s.wiener, "seed {seed}");
        }
    }

    #[test]
    fn every_assignment_materializes_to_its_cost() {
        let g = Graph::from_edges(7, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 5), (5, 6), (1, 6)]).unwrap();
        let w = vi_witness(&g).unwrap();
        let types = classify_components(&g, &w.s).unwrap();
        let ext: Vec<Vec<Extension>> = types.iter().map(|t| extensions_of(&g, &w.s, t)).collect();
        let cands = enumerate_candidate_trees(&g, &w.s, &types, 1000).unwrap();
        assert!(!cands.is_empty());
        for cand in &cands {
            let c = extension_constants(&g, &w.s, &types, &ext, cand);
            let total: u64 = c.counts.iter().sum();
            assert_eq!(total as usize, w.components.len() - cand.used.iter().sum::<usize>());
            // walk every assignment of the first type, the rest forced to their first extension
            let mut x: Vec<Vec<u64>> = (0..types.len())
                .map(|t| {
                    let mut v = vec![0; ext[t].len()];
                    if let Some(f) = v.first_mut() {
                        *f = c.counts[t];
                    }
                    v
                })
                .collect();
            for first in 0..ext[0].len() {
                x[0].iter_mut().for_each(|v| *v = 0);
                x[0][first] = c.counts[0];
                let flat: Vec<u64> = x.iter().flatten().copied().collect();
                let tree = materialize(&g, &types, &ext, cand, &x).unwrap();
                assert_eq!(tree.wiener(), cand.wiener() + assignment_cost(&c, &flat));
            }
        }
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        for seed in 0..200 {
            let n = 3 + seed as usize % 5;
            let p = [0.3, 0.5, 0.7][seed as usize % 3];
            let g = gen_random_connected(n, p, 7000 + seed).unwrap();
            let (_, w) = mad_tree_bruteforce(&g).unwrap();
            assert_eq!(solve_vertex_integrity(&g, None).unwrap().wiener, w, "seed {seed}");
        }
    }

    /// Cliques hanging off a hub, each joined to it through `links` vertices.
    fn star_of_cliques(sizes: &[usize], links: usize) -> Graph {
        let mut edges = Vec::new();
        let mut next = 1;
        for &c in sizes {
            let block: Vec<usize> = (next..next + c).collect();
            for (i, &a) in block.iter().enumerate() {
                edges.extend(block[i + 1..].iter().map(|&b| (a, b)));
                if i < links {
                    edges.push((0, a));
                }
            }
            next += c;
        }
        Graph::from_edges(next, &edges).unwrap()
    }

    #[test]
    fn matches_oracle_on_star_of_cliques() {
        for (sizes, links) in [
            (&[2, 2, 2, 2, 2][..], 1),
            (&[3, 3, 3], 3),
            (&[3, 3, 2, 2], 2),
            (&[2, 2, 2, 2, 3], 2),
            (&[1, 1, 3, 3, 3], 1),
            (&[4, 4, 3], 2),
        ] {
            let g = star_of_cliques(sizes, links);
            assert!(g.n() <= 12);
            let (_, w) = mad_tree_bruteforce(&g).unwrap();
            let s = solve_vertex_integrity(&g, None).unwrap();
            assert_eq!(s.wiener, w, "{sizes:?} {links}");
            assert_eq!(s.tree.wiener(), w);
        }
    }
}
