use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{bfs_adj, Graph};
use crate::integrity::types::{canonical_form, ComponentType};
use crate::oracle::edge_list_wiener;
use crate::util::UnionFind;

/// A tree of a component's forest hanging off the separator by one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    /// Separator vertex the piece hangs from.
    pub attach: usize,
    pub size: u64,
    /// Sum of distances from the attach vertex to the piece's vertices.
    pub depth_sum: u64,
    /// Sum of distances over pairs inside the piece.
    pub internal: u64,
}

/// How one component joins a tree containing the separator: a spanning
/// forest of the component plus one crossing edge per forest tree. Local
/// indices refer to positions in a member of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub internal: Vec<(usize, usize)>,
    pub crossing: Vec<(usize, usize)>,
    pub pieces: Vec<Piece>,
}

/// A component used to join separator vertices that `F_S` leaves apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connector {
    pub internal: Vec<(usize, usize)>,
    pub crossing: Vec<(usize, usize)>,
}

fn local_edges(g: &Graph, rep: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..rep.len() {
        for j in i + 1..rep.len() {
            if g.has_edge(rep[i], rep[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn for_each_forest(c: usize, edges: &[(usize, usize)], f: &mut impl FnMut(&[(usize, usize)])) {
    fn rec(
        i: usize,
        edges: &[(usize, usize)],
        uf: &mut Vec<usize>,
        chosen: &mut Vec<(usize, usize)>,
        f: &mut impl FnMut(&[(usize, usize)]),
    ) {
        if i == edges.len() {
            f(chosen);
            return;
        }
        rec(i + 1, edges, uf, chosen, f);
        let (a, b) = edges[i];
        let find = |uf: &Vec<usize>, mut x: usize| {
            while uf[x] != x {
                x = uf[x];
            }
            x
        };
        let (ra, rb) = (find(uf, a), find(uf, b));
        if ra != rb {
            uf[rb] = ra;
            chosen.push(edges[i]);
            rec(i + 1, edges, uf, chosen, f);
            chosen.pop();
            uf[rb] = rb;
        }
    }
    let mut uf: Vec<usize> = (0..c).collect();
    rec(0, edges, &mut uf, &mut Vec::new(), f);
}

fn pieces_of(c: usize, forest: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(c);
    for &(a, b) in forest {
        uf.union(a, b);
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); c];
    for v in 0..c {
        by_root[uf.find(v)].push(v);
    }
    by_root.into_iter().filter(|p| !p.is_empty()).collect()
}

fn adjacency(c: usize, forest: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); c];
    for &(a, b) in forest {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn crossing_options(g: &Graph, s: &[usize], rep: &[usize]) -> Vec<Vec<usize>> {
    rep.iter()
        .map(|&v| s.iter().copied().filter(|&x| g.has_edge(v, x)).collect())
        .collect()
}

/// Code of an attachment up to relabeling the component, with the
/// separator fixed.
fn attachment_code(c: usize, s: &[usize], internal: &[(usize, usize)], crossing: &[(usize, usize)]) -> Vec<u64> {
    let label = |i: usize| {
        crossing
            .iter()
            .filter(|&&(v, _)| v == i)
            .fold(0u64, |m, &(_, x)| m | 1 << s.binary_search(&x).expect("separator vertex"))
    };
    let adj = |i: usize, j: usize| internal.contains(&(i.min(j), i.max(j)));
    canonical_form(c, label, adj).0
}

/// Distinct extensions of a type, with isomorphic ones merged.
pub fn extensions_of(g: &Graph, s: &[usize], ty: &ComponentType) -> Vec<Extension> {
    let rep = ty.representative();
    let c = rep.len();
    let options = crossing_options(g, s, rep);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_forest(c, &local_edges(g, rep), &mut |forest| {
        let pieces = pieces_of(c, forest);
        let adj = adjacency(c, forest);
        // one crossing edge per piece
        let choices: Vec<Vec<(usize, usize)>> = pieces
            .iter()
            .map(|p| p.iter().flat_map(|&v| options[v].iter().map(move |&x| (v, x))).collect())
            .collect();
        if choices.iter().any(Vec::is_empty) {
            return;
        }
        let mut pick = vec![0usize; pieces.len()];
        loop {
            let crossing: Vec<(usize, usize)> = pick.iter().zip(&choices).map(|(&i, ch)| ch[i]).collect();
            let code = attachment_code(c, s, forest, &crossing);
            if seen.insert(code) {
                let pieces = crossing
                    .iter()
                    .map(|&(v, x)| {
                        let dist = bfs_adj(c, |y| &adj[y], v);
                        let members: Vec<u64> = dist.iter().flatten().map(|&d| d as u64).collect();
                        let size = members.len() as u64;
                        let depth_sum = members.iter().sum::<u64>() + size;
                        Piece {
                            attach: x,
                            size,
                            depth_sum,
                            internal: piece_internal(&adj, &dist),
                        }
                    })
                    .collect();
                out.push(Extension {
                    internal: forest.to_vec(),
                    crossing,
                    pieces,
                });
            }
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    });
    out
}

fn piece_internal(adj: &[Vec<usize>], dist_from_attach: &[Option<u32>]) -> u64 {
    let members: Vec<usize> = (0..adj.len()).filter(|&v| dist_from_attach[v].is_some()).collect();
    let mut total = 0u64;
    for &v in &members {
        let d = bfs_adj(adj.len(), |y| &adj[y], v);
        total += members.iter().filter(|&&u| u > v).map(|&u| d[u].unwrap() as u64).sum::<u64>();
    }
    total
}

/// Attachments that join at least two separator vertices without closing a
/// cycle through the separator.
pub fn connectors_of(g: &Graph, s: &[usize], ty: &ComponentType) -> Vec<Connector> {
    let rep = ty.representative();
    let c = rep.len();
    let options = crossing_options(g, s, rep);
    let mut out = Vec::new();
    for_each_forest(c, &local_edges(g, rep), &mut |forest| {
        let pieces = pieces_of(c, forest);
        let lists: Vec<Vec<(usize, usize)>> = pieces
            .iter()
            .map(|p| p.iter().flat_map(|&v| options[v].iter().map(move |&x| (v, x))).collect())
            .collect();
        // nodes: separator positions, then pieces
        let mut uf = UnionFind::new(s.len() + pieces.len());
        let mut chosen = Vec::new();
        choose_crossings(s, &lists, 0, 0, 0, false, &mut uf, &mut chosen, &mut |crossing| {
            out.push(Connector {
                internal: forest.to_vec(),
                crossing: crossing.to_vec(),
            })
        });
    });
    out
}

#[allow(clippy::too_many_arguments)]
fn choose_crossings(
    s: &[usize],
    lists: &[Vec<(usize, usize)>],
    piece: usize,
    idx: usize,
    taken: usize,
    joined: bool,
    uf: &mut UnionFind,
    chosen: &mut Vec<(usize, usize)>,
    emit: &mut impl FnMut(&[(usize, usize)]),
) {
    if piece == lists.len() {
        if joined {
            emit(chosen);
        }
        return;
    }
    if idx == lists[piece].len() {
        if taken > 0 {
            choose_crossings(s, lists, piece + 1, 0, 0, joined || taken >= 2, uf, chosen, emit);
        }
        return;
    }
    choose_crossings(s, lists, piece, idx + 1, taken, joined, uf, chosen, emit);
    let (v, x) = lists[piece][idx];
    let node = s.len() + piece;
    let pos = s.binary_search(&x).expect("separator vertex");
    if !uf.same(node, pos) {
        let mut saved = uf.clone();
        uf.union(node, pos);
        chosen.push((v, x));
        choose_crossings(s, lists, piece, idx + 1, taken + 1, joined, uf, chosen, emit);
        chosen.pop();
        std::mem::swap(uf, &mut saved);
    }
}

/// A tree spanning the separator and the connector components it uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateTree {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Members of each type consumed as connectors (always the first ones).
    pub used: Vec<usize>,
}

impl CandidateTree {
    pub fn wiener(&self) -> u64 {
        let local = |v: usize| self.vertices.binary_search(&v).expect("vertex of the tree");
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (local(a), local(b))).collect();
        edge_list_wiener(self.vertices.len(), &edges)
    }
}

/// All trees made of a forest on the separator joined through connector
/// components. Connectors are chosen in a fixed order so each tree appears
/// once up to swapping same-type components.
pub fn enumerate_candidate_trees(
    g: &Graph,
    s: &[usize],
    types: &[ComponentType],
    limit: usize,
) -> Result<Vec<CandidateTree>> {
    let mut s = s.to_vec();
    s.sort_unstable();
    let s_edges: Vec<(usize, usize)> = local_edges(g, &s);
    let connectors: Vec<Vec<Connector>> = if s.len() >= 2 {
        types.iter().map(|t| connectors_of(g, &s, t)).collect()
    } else {
        vec![Vec::new(); types.len()]
    };
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_forest(s.len(), &s_edges, &mut |forest| {
        if overflow {
            return;
        }
        let mut uf = UnionFind::new(s.len());
        for &(a, b) in forest {
            uf.union(a, b);
        }
        let classes = (0..s.len()).filter(|&i| uf.find(i) == i).count();
        let base = CandidateTree {
            vertices: s.clone(),
            edges: forest.iter().map(|&(a, b)| (s[a], s[b])).collect(),
            used: vec![0; types.len()],
        };
        let mut search = Joiner {
            s: &s,
            types,
            connectors: &connectors,
            limit,
            out: &mut out,
        };
        if !search.extend(base, &mut uf, classes, (0, 0)) {
            overflow = true;
        }
    });
    if overflow {
        return Err(Error::TooLarge {
            what: "candidate separator trees",
            actual: out.len(),
            limit,
        });
    }
    Ok(out)
}

struct Joiner<'a> {
    s: &'a [usize],
    types: &'a [ComponentType],
    connectors: &'a [Vec<Connector>],
    limit: usize,
    out: &'a mut Vec<CandidateTree>,
}

impl Joiner<'_> {
    fn extend(&mut self, tree: CandidateTree, uf: &mut UnionFind, classes: usize, from: (usize, usize)) -> bool {
        if classes == 1 {
            if self.out.len() >= self.limit {
                return false;
            }
            let mut tree = tree;
            tree.vertices.sort_unstable();
            tree.edges = tree.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            tree.edges.sort_unstable();
            self.out.push(tree);
            return true;
        }
        for t in from.0..self.types.len() {
            if tree.used[t] == self.types[t].count() {
                continue;
            }
            let start = if t == from.0 { from.1 } else { 0 };
            for (ci, con) in self.connectors[t].iter().enumerate().skip(start) {
                let mut next_uf = uf.clone();
                let mut merges = 0;
                let mut ok = true;
                for piece in pieces_by_crossing(con) {
                    let first = self.pos(piece[0]);
                    for &x in &piece[1..] {
                        if next_uf.union(first, self.pos(x)) {
                            merges += 1;
                        } else {
                            ok = false;
                        }
                    }
                }
                if !ok || merges == 0 {
                    continue;
                }
                let member = &self.types[t].members[tree.used[t]];
                let mut next = tree.clone();
                next.used[t] += 1;
                next.vertices.extend_from_slice(member);
                next.edges.extend(con.internal.iter().map(|&(a, b)| (member[a], member[b])));
                next.edges.extend(con.crossing.iter().map(|&(v, x)| (member[v], x)));
                if !self.extend(next, &mut next_uf, classes - merges, (t, ci)) {
                    return false;
                }
            }
        }
        true
    }

    fn pos(&self, x: usize) -> usize {
        self.s.binary_search(&x).expect("separator vertex")
    }
}

/// Separator targets of each piece of a connector.
fn pieces_by_crossing(con: &Connector) -> Vec<Vec<usize>> {
    let c = con
        .internal
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .chain(con.crossing.iter().map(|&(v, _)| v))
        .max()
        .map_or(0, |m| m + 1);
    let mut uf = UnionFind::new(c);
    for &(a, b) in &con.internal {
        uf.union(a, b);
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); c];
    for &(v, x) in &con.crossing {
        groups[uf.find(v)].push(x);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Distance constants of every (type, extension) class for one candidate
/// tree. Classes are numbered type by type, in extension order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionConstants {
    /// Components of each type left after removing the connectors.
    pub counts: Vec<u64>,
    /// First class index of each type, plus the total at the end.
    pub offsets: Vec<usize>,
    /// Pair distances inside one component.
    pub d_self: Vec<u64>,
    /// Distances from one component to the candidate tree.
    pub d_tree: Vec<u64>,
    /// Distances between two distinct components with classes `a` and `b`.
    pub d_pair: Vec<Vec<u64>>,
}

impl ExtensionConstants {
    pub fn classes(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }
}

pub fn extension_constants(
    g: &Graph,
    s: &[usize],
    types: &[ComponentType],
    extensions: &[Vec<Extension>],
    tree: &CandidateTree,
) -> ExtensionConstants {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &tree.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let size = tree.vertices.len() as u64;
    let mut dist = vec![Vec::new(); n];
    let mut dsum = vec![0u64; n];
    for &x in s {
        let d: Vec<u64> = bfs_adj(n, |y| &adj[y], x)
            .into_iter()
            .map(|d| d.map_or(0, u64::from))
            .collect();
        dsum[x] = d.iter().sum();
        dist[x] = d;
    }
    let pair = |p: &Piece, q: &Piece| q.size * p.depth_sum + p.size * q.depth_sum + p.size * q.size * dist[p.attach][q.attach];

    let mut offsets = vec![0];
    let mut flat: Vec<&Extension> = Vec::new();
    let mut counts = Vec::new();
    for (t, ty) in types.iter().enumerate() {
        counts.push((ty.count() - tree.used[t]) as u64);
        flat.extend(extensions[t].iter());
        offsets.push(flat.len());
    }
    let d_self = flat
        .iter()
        .map(|e| {
            let within: u64 = e.pieces.iter().map(|p| p.internal).sum();
            let across: u64 = (0..e.pieces.len())
                .flat_map(|i| (i + 1..e.pieces.len()).map(move |j| (i, j)))
                .map(|(i, j)| pair(&e.pieces[i], &e.pieces[j]))
                .sum();
            within + across
        })
        .collect();
    let d_tree = flat
        .iter()
        .map(|e| e.pieces.iter().map(|p| size * p.depth_sum + p.size * dsum[p.attach]).sum())
        .collect();
    let d_pair = flat
        .iter()
        .map(|a| {
            flat.iter()
                .map(|b| a.pieces.iter().flat_map(|p| b.pieces.iter().map(move |q| (p, q))).map(|(p, q)| pair(p, q)).sum())
                .collect()
        })
        .collect();
    ExtensionConstants {
        counts,
        offsets,
        d_self,
        d_tree,
        d_pair,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrity::types::classify_components;

    #[test]
    fn leaf_extensions_and_constants() {
        // path 1 - 0 - 2 with separator {0}; both leaves share a type
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let types = classify_components(&g, &[0]).unwrap();
        let ext: Vec<Vec<Extension>> = types.iter().map(|t| extensions_of(&g, &[0], t)).collect();
        assert_eq!(ext[0].len(), 1);
        let trees = enumerate_candidate_trees(&g, &[0], &types, 100).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].vertices, vec![0]);
        let c = extension_constants(&g, &[0], &types, &ext, &trees[0]);
        assert_eq!(c.counts, vec![2]);
        assert_eq!(c.d_self, vec![0]);
        assert_eq!(c.d_pair, vec![vec![2]]);
        assert_eq!(c.d_tree, vec![1]);
    }

    #[test]
    fn leaf_on_two_vertex_tree() {
        // separator {0, 1} joined by an edge, leaf 2 on vertex 0
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let types = classify_components(&g, &[0, 1]).unwrap();
        let ext: Vec<Vec<Extension>> = types.iter().map(|t| extensions_of(&g, &[0, 1], t)).collect();
        let trees = enumerate_candidate_trees(&g, &[0, 1], &types, 100).unwrap();
        assert_eq!(trees.len(), 1);
        let c = extension_constants(&g, &[0, 1], &types, &ext, &trees[0]);
        assert_eq!(c.d_tree, vec![3]);
    }

    #[test]
    fn single_separator_vertex_needs_no_connectors() {
        let g = Graph::star(4);
        let types = classify_components(&g, &[0]).unwrap();
        let trees = enumerate_candidate_trees(&g, &[0], &types, 100).unwrap();
        assert_eq!(trees.len(), 1);
        assert!(trees[0].edges.is_empty());
    }

    #[test]
    fn adjacent_separator_pair() {
        // separator {0, 1} adjacent, shared leaf 2 seeing both
        let g = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let types = classify_components(&g, &[0, 1]).unwrap();
        let trees = enumerate_candidate_trees(&g, &[0, 1], &types, 100).unwrap();
        // the edge alone, or no edge and the leaf joining both
        assert_eq!(trees.len(), 2);
        assert!(trees.iter().any(|t| t.edges == vec![(0, 1)]));
        assert!(trees.iter().any(|t| t.edges == vec![(0, 2), (1, 2)]));
    }

    #[test]
    fn nonadjacent_separator_pair_uses_connectors() {
        // C4 with separator {0, 2}: components {1} and {3} both see 0 and 2
        let g = Graph::cycle(4);
        let types = classify_components(&g, &[0, 2]).unwrap();
        assert_eq!(types.len(), 1);
        let trees = enumerate_candidate_trees(&g, &[0, 2], &types, 100).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].edges, vec![(0, 1), (1, 2)]);
        assert_eq!(trees[0].used, vec![1]);
    }

    #[test]
    fn triangle_extensions_merge_isomorphic_patterns() {
        // triangle {1, 2, 3} fully joined to separator vertex 0 (K4)
        let g = Graph::complete(4);
        let types = classify_components(&g, &[0]).unwrap();
        let ext = extensions_of(&g, &[0], &types[0]);
        // the 16 spanning trees of K4 fall into classes fixing 0: star at 0,
        // star at another vertex, path with 0 at an end, path with 0 inside
        assert_eq!(ext.len(), 4);
    }

    #[test]
    fn candidate_limit_is_enforced() {
        let g = Graph::complete_multipartite(&[2, 4]);
        let types = classify_components(&g, &[0, 2]).unwrap();
        assert!(enumerate_candidate_trees(&g, &[0, 2], &types, 1000).unwrap().len() > 1);
        assert!(matches!(
            enumerate_candidate_trees(&g, &[0, 2], &types, 1),
            Err(Error::TooLarge { .. })
        ));
    }
}
