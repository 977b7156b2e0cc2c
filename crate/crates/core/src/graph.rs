//! Simple undirected graphs, spanning trees and the distance machinery used by
//! every solver: BFS profiles, Wiener indices, medians, induced paths and
//! shortest cycles.
//!
//! The Wiener index is always the sum over *unordered* vertex pairs. For a
//! tree it equals the sum of edge contributions `|T_u| * |T_v|`, where the two
//! factors are the sizes of the components left after deleting the edge.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::util::UnionFind;

/// Largest supported vertex count. Keeps every Wiener index (at most `n^3`)
/// inside `u64`.
pub const MAX_VERTICES: usize = (1 << 21) - 1;

/// Simple undirected graph on the vertex ids `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edge_list())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                actual: n,
                limit: MAX_VERTICES,
            });
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("parallel edge at vertex {v}")));
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).expect("cycle edges are simple")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph is simple")
    }

    /// Star `K_{1,n-1}` centered at vertex 0.
    pub fn star(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::from_edges(n, &edges).expect("star edges are simple")
    }

    /// Complete multipartite graph with the given part sizes; parts occupy
    /// consecutive id ranges.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut part_of = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat(i).take(p));
        }
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("multipartite graph is simple")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// True for the empty graph and for every graph with a single component.
    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.m + 1 == self.n() && self.is_connected()
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n() == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        if !self.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(())
    }

    /// Subgraph induced by `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), &edges).expect("induced subgraph is simple")
    }

    /// Copy with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n(), &edges).expect("relabeling preserves simplicity")
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("complement is simple")
    }
}

/// A spanning tree of some host graph: exactly `n - 1` edges forming a
/// connected acyclic subgraph. Edges are stored normalized (`u < v`) and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Validates `edges` as a spanning tree of `host`.
    pub fn new(host: &Graph, edges: Vec<(usize, usize)>) -> Result<Self> {
        let tree = SpanningTree::from_edges(host.n(), edges)?;
        if let Some(&(u, v)) = tree.edges.iter().find(|&&(u, v)| !host.has_edge(u, v)) {
            return Err(Error::InvalidTree(format!(
                "edge {u}-{v} is not an edge of the host graph"
            )));
        }
        Ok(tree)
    }

    /// Validates `edges` as a tree on `0..n` without reference to a host.
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!(
                "expected {} edges, found {}",
                n - 1,
                edges.len()
            )));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        let mut uf = UnionFind::new(n);
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidTree(format!("bad edge {u}-{v}")));
            }
            if !uf.union(u, v) {
                return Err(Error::InvalidTree(format!("edge {u}-{v} closes a cycle")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        Ok(SpanningTree { n, edges: norm })
    }

    /// The tree itself when `g` is a tree.
    pub fn from_tree_graph(g: &Graph) -> Result<Self> {
        SpanningTree::from_edges(g.n(), g.edge_list())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn as_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges).expect("tree edges are simple")
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn wiener(&self) -> u64 {
        wiener_tree(self)
    }
}

/// Hop distances from a single source; `None` marks unreachable vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    pub source: usize,
    pub dist: Vec<Option<u32>>,
}

impl DistanceProfile {
    /// Sum of distances to all reachable vertices.
    pub fn total(&self) -> u64 {
        self.dist.iter().flatten().map(|&d| d as u64).sum()
    }

    pub fn all_reachable(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }
}

pub fn bfs_distances(g: &Graph, v: usize) -> DistanceProfile {
    assert!(v < g.n(), "source {v} out of range");
    DistanceProfile {
        source: v,
        dist: bfs_adj(g.n(), |x| g.neighbors(x), v),
    }
}

pub(crate) fn bfs_adj<'a>(
    n: usize,
    neighbors: impl Fn(usize) -> &'a [usize],
    source: usize,
) -> Vec<Option<u32>> {
    let mut dist = vec![None; n];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap() + 1;
        for &y in neighbors(x) {
            if dist[y].is_none() {
                dist[y] = Some(d);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Sum of graph distances over unordered vertex pairs.
pub fn wiener_graph(g: &Graph) -> Result<u64> {
    g.require_connected()?;
    let mut twice = 0u64;
    for v in 0..g.n() {
        twice += bfs_distances(g, v).total();
    }
    Ok(twice / 2)
}

/// Wiener index of a tree via edge contributions, in linear time.
pub fn wiener_tree(t: &SpanningTree) -> u64 {
    let sizes = RootedSizes::new(t.n, &t.adjacency());
    let n = t.n as u64;
    sizes
        .order
        .iter()
        .skip(1)
        .map(|&v| {
            let s = sizes.size[v] as u64;
            s * (n - s)
        })
        .sum()
}

/// Wiener index of raw tree edges on `0..n`.
pub fn wiener_of_tree_edges(n: usize, edges: &[(usize, usize)]) -> Result<u64> {
    Ok(wiener_tree(&SpanningTree::from_edges(n, edges.to_vec())?))
}

/// `|T_u| * |T_v|` for the tree edge `uv`.
pub fn edge_contribution(t: &SpanningTree, e: (usize, usize)) -> Result<u64> {
    let (u, v) = e;
    if !t.contains_edge(u, v) {
        return Err(Error::EdgeNotInTree(u, v));
    }
    let sizes = RootedSizes::new(t.n, &t.adjacency());
    // the endpoint farther from the root owns the subtree below the edge
    let child = if sizes.parent[v] == Some(u) { v } else { u };
    let s = sizes.size[child] as u64;
    Ok(s * (t.n as u64 - s))
}

struct RootedSizes {
    order: Vec<usize>,
    parent: Vec<Option<usize>>,
    size: Vec<usize>,
}

impl RootedSizes {
    fn new(n: usize, adj: &[Vec<usize>]) -> Self {
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        order.push(0);
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
        }
        let mut size = vec![1usize; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        RootedSizes {
            order,
            parent,
            size,
        }
    }
}

/// Breadth-first search tree from `root`; each vertex hangs off its
/// smallest-id neighbor in the previous layer.
pub fn bfs_tree(g: &Graph, root: usize) -> Result<SpanningTree> {
    g.require_connected()?;
    let mut parent = vec![usize::MAX; g.n()];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::with_capacity(g.n().saturating_sub(1));
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                edges.push((x, y));
                queue.push_back(y);
            }
        }
    }
    SpanningTree::from_edges(g.n(), edges)
}

/// Best breadth-first search tree over all roots: a cheap upper bound on the
/// optimum, with its value. Ties go to the smaller root.
pub fn best_bfs_tree(g: &Graph) -> Result<(SpanningTree, u64)> {
    g.require_connected()?;
    let mut best: Option<(SpanningTree, u64)> = None;
    for r in 0..g.n() {
        let t = bfs_tree(g, r)?;
        let w = t.wiener();
        if best.as_ref().map_or(true, |b| w < b.1) {
            best = Some((t, w));
        }
    }
    Ok(best.expect("graph has a vertex"))
}

/// All vertices minimizing the distance sum to every other vertex.
pub fn median_vertices(g: &Graph) -> Result<Vec<usize>> {
    g.require_connected()?;
    let sums: Vec<u64> = (0..g.n()).map(|v| bfs_distances(g, v).total()).collect();
    let best = *sums.iter().min().expect("graph has vertices");
    Ok((0..g.n()).filter(|&v| sums[v] == best).collect())
}

/// True iff `path` has no chord in `g`. Consecutive vertices must be adjacent
/// and all vertices distinct.
pub fn is_induced_path(g: &Graph, path: &[usize]) -> Result<bool> {
    let mut seen = std::collections::HashSet::new();
    for &v in path {
        if v >= g.n() {
            return Err(Error::NotAPath(format!("vertex {v} out of range")));
        }
        if !seen.insert(v) {
            return Err(Error::NotAPath(format!("vertex {v} repeats")));
        }
    }
    for w in path.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(Error::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
    }
    for i in 0..path.len() {
        for j in i + 2..path.len() {
            if g.has_edge(path[i], path[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A minimum-length cycle as `(length, vertices in cyclic order)`, or `None`
/// for forests. Ties go to the smallest BFS root, then the first closing edge
/// in adjacency order.
pub fn shortest_cycle(g: &Graph) -> Option<(usize, Vec<usize>)> {
    let n = g.n();
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        dist.fill(u32::MAX);
        dist[s] = 0;
        parent[s] = usize::MAX;
        let mut found: Option<(usize, usize, usize)> = None;
        let bound = |found: &Option<(usize, usize, usize)>, best: &Option<(usize, Vec<usize>)>| {
            found
                .map(|f| f.0)
                .or(best.as_ref().map(|b| b.0))
                .unwrap_or(usize::MAX)
        };
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            // closing edges found from here on have length at least 2 d(x) + 1
            if 2 * dist[x] as usize + 1 >= bound(&found, &best) {
                break;
            }
            for &y in g.neighbors(x) {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = (dist[x] + dist[y] + 1) as usize;
                    if len < bound(&found, &best) {
                        found = Some((len, x, y));
                    }
                }
            }
        }
        if let Some((len, x, y)) = found {
            let climb = |mut v: usize| {
                let mut path = vec![v];
                while v != s {
                    v = parent[v];
                    path.push(v);
                }
                path
            };
            let mut cycle = climb(x);
            cycle.reverse();
            let mut back = climb(y);
            back.pop();
            cycle.extend(back);
            debug_assert_eq!(cycle.len(), len);
            best = Some((len, cycle));
        }
    }
    best
}
