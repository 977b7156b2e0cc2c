use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::{for_each_k_subset, for_each_permutation};

/// Largest graph accepted by the separator search.
pub const MAX_VI_N: usize = 24;
/// Largest component canonicalized by brute force over orderings.
pub const MAX_COMPONENT: usize = 9;

/// A separator `s` achieving the vertex integrity `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViWitness {
    pub s: Vec<usize>,
    /// Components of `G - S`, each sorted, ordered by smallest vertex.
    pub components: Vec<Vec<usize>>,
    pub k: usize,
}

pub(crate) fn components_without(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for &y in g.neighbors(comp[i]) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Minimum of `|S|` plus the largest component of `G - S`, by trying
/// separators in order of size and then lexicographically.
pub fn vi_witness(g: &Graph) -> Result<ViWitness> {
    g.require_connected()?;
    let n = g.n();
    if n > MAX_VI_N {
        return Err(Error::TooLarge {
            what: "vertices for the separator search",
            actual: n,
            limit: MAX_VI_N,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut best = (n, Vec::new());
    let mut removed = vec![false; n];
    for size in 1..n {
        if size >= best.0 {
            break;
        }
        for_each_k_subset(&all, size, |s| {
            for &v in s {
                removed[v] = true;
            }
            let largest = components_without(g, &removed).iter().map(Vec::len).max().unwrap_or(0);
            for &v in s {
                removed[v] = false;
            }
            if size + largest < best.0 {
                best = (size + largest, s.to_vec());
            }
            true
        });
    }
    let (k, s) = best;
    let mut removed = vec![false; n];
    for &v in &s {
        removed[v] = true;
    }
    Ok(ViWitness {
        components: components_without(g, &removed),
        s,
        k,
    })
}

/// Smallest code over all orderings of a small labeled graph, with the
/// ordering achieving it. The code lists the labels in order followed by the
/// upper adjacency triangle as bits.
pub(crate) fn canonical_form(
    c: usize,
    label: impl Fn(usize) -> u64,
    adj: impl Fn(usize, usize) -> bool,
) -> (Vec<u64>, Vec<usize>) {
    let labels: Vec<u64> = (0..c).map(&label).collect();
    let matrix: Vec<Vec<bool>> = (0..c).map(|i| (0..c).map(|j| adj(i, j)).collect()).collect();
    let words = (c * c.saturating_sub(1) / 2).div_ceil(64);
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    let mut code = vec![0u64; c + words];
    let mut order: Vec<usize> = (0..c).collect();
    for_each_permutation(&mut order, &mut |ord: &[usize]| {
        for (i, &v) in ord.iter().enumerate() {
            code[i] = labels[v];
        }
        if let Some((b, _)) = &best {
            if code[..c] > b[..c] {
                return;
            }
        }
        code[c..].fill(0);
        let mut bit = 0;
        for i in 0..c {
            for j in i + 1..c {
                if matrix[ord[i]][ord[j]] {
                    code[c + bit / 64] |= 1 << (bit % 64);
                }
                bit += 1;
            }
        }
        if best.as_ref().map_or(true, |(b, _)| code < *b) {
            best = Some((code.clone(), ord.to_vec()));
        }
    });
    best.expect("at least one ordering")
}

/// Components of `G - S` sharing a code: isomorphic with matching
/// `S`-neighborhoods. Each member lists its vertices in canonical order, so
/// position `i` of one member corresponds to position `i` of any other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentType {
    pub code: Vec<u64>,
    pub members: Vec<Vec<usize>>,
}

impl ComponentType {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn size(&self) -> usize {
        self.members[0].len()
    }

    pub fn representative(&self) -> &[usize] {
        &self.members[0]
    }
}

pub(crate) fn s_mask(g: &Graph, s: &[usize], v: usize) -> u64 {
    s.iter()
        .enumerate()
        .filter(|&(_, &x)| g.has_edge(v, x))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Groups the components of `G - S` into types, sorted by code.
pub fn classify_components(g: &Graph, s: &[usize]) -> Result<Vec<ComponentType>> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() > 64 {
        return Err(Error::TooLarge {
            what: "separator size",
            actual: s.len(),
            limit: 64,
        });
    }
    let mut removed = vec![false; g.n()];
    for &v in &s {
        removed[v] = true;
    }
    let mut groups: BTreeMap<Vec<u64>, Vec<Vec<usize>>> = BTreeMap::new();
    for comp in components_without(g, &removed) {
        if comp.len() > MAX_COMPONENT {
            return Err(Error::TooLarge {
                what: "component size",
                actual: comp.len(),
                limit: MAX_COMPONENT,
            });
        }
        let (code, ord) = canonical_form(
            comp.len(),
            |i| s_mask(g, &s, comp[i]),
            |i, j| g.has_edge(comp[i], comp[j]),
        );
        groups.entry(code).or_default().push(ord.iter().map(|&i| comp[i]).collect());
    }
    Ok(groups
        .into_iter()
        .map(|(code, members)| ComponentType { code, members })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_examples() {
        let star = Graph::star(6);
        let w = vi_witness(&star).unwrap();
        assert_eq!((w.s.clone(), w.k), (vec![0], 2));
        assert_eq!(w.components.len(), 5);
        let p4 = vi_witness(&Graph::path(4)).unwrap();
        assert_eq!((p4.s, p4.k), (vec![1], 3));
        let k4 = vi_witness(&Graph::complete(4)).unwrap();
        assert_eq!((k4.s, k4.k), (vec![], 4));
    }

    #[test]
    fn witness_matches_exhaustive_minimum() {
        for seed in 0..20 {
            let g = crate::gen::gen_random_connected(8, 0.3, seed).unwrap();
            let w = vi_witness(&g).unwrap();
            let mut best = usize::MAX;
            for mask in 0u32..1 << 8 {
                let removed: Vec<bool> = (0..8).map(|v| mask >> v & 1 == 1).collect();
                let big = components_without(&g, &removed).iter().map(Vec::len).max().unwrap_or(0);
                best = best.min(mask.count_ones() as usize + big);
            }
            assert_eq!(w.k, best);
            assert!(w.components.iter().all(|c| c.len() + w.s.len() <= w.k));
        }
    }

    #[test]
    fn star_leaves_share_a_type() {
        let types = classify_components(&Graph::star(3), &[0]).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].count(), 2);
    }

    #[test]
    fn leaves_on_different_separator_vertices_differ() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3)]).unwrap();
        let types = classify_components(&g, &[0, 1]).unwrap();
        assert_eq!(types.len(), 2);
        assert!(types.iter().all(|t| t.count() == 1));
    }

    #[test]
    fn isomorphic_triangles_share_a_type() {
        // two triangles hanging off vertex 0 through different corners
        let g = Graph::from_edges(
            7,
            &[(1, 2), (2, 3), (1, 3), (0, 1), (4, 5), (5, 6), (4, 6), (0, 6)],
        )
        .unwrap();
        let types = classify_components(&g, &[0]).unwrap();
        assert_eq!(types.len(), 1);
        let t = &types[0];
        assert_eq!(t.count(), 2);
        // positions line up: the corner seeing vertex 0 sits at the same index
        let pos = |m: &Vec<usize>| m.iter().position(|&v| g.has_edge(v, 0)).unwrap();
        assert_eq!(pos(&t.members[0]), pos(&t.members[1]));
        // a path component is a different type
        let h = Graph::from_edges(7, &[(1, 2), (2, 3), (1, 3), (0, 1), (4, 5), (5, 6), (0, 6)]).unwrap();
        assert_eq!(classify_components(&h, &[0]).unwrap().len(), 2);
    }

    #[test]
    fn canonical_form_is_invariant() {
        let edges = [(0, 1), (1, 2), (2, 3)];
        let adj = |i: usize, j: usize| edges.contains(&(i.min(j), i.max(j)));
        let (a, _) = canonical_form(4, |i| (i == 0) as u64, adj);
        let relabel = [3, 2, 1, 0];
        let (b, _) = canonical_form(4, |i| (relabel[i] == 0) as u64, |i, j| adj(relabel[i], relabel[j]));
        assert_eq!(a, b);
        let (c, _) = canonical_form(4, |i| (i == 1) as u64, adj);
        assert_ne!(a, c);
    }
}
