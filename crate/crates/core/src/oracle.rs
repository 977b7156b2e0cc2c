//! Exhaustive ground truth: spanning-tree enumeration by inclusion/exclusion
//! over an edge list, Kirchhoff counting and the brute-force MAD tree.

use crate::error::{Error, Result};
use crate::graph::{Graph, SpanningTree};
use crate::par;

/// Default size guard for exhaustive routines.
pub const DEFAULT_MAX_ORACLE_N: usize = 16;

/// Environment variable overriding [`DEFAULT_MAX_ORACLE_N`].
pub const MAX_ORACLE_N_ENV: &str = "MADST_MAX_ORACLE_N";

/// The oracle size guard, honoring `MADST_MAX_ORACLE_N` when it parses.
pub fn max_oracle_n() -> usize {
    std::env::var(MAX_ORACLE_N_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORACLE_N)
}

fn guard(g: &Graph, limit: usize) -> Result<()> {
    g.require_connected()?;
    if g.n() > limit {
        return Err(Error::TooLarge {
            what: "vertex count",
            actual: g.n(),
            limit,
        });
    }
    Ok(())
}

/// Spanning trees of a graph that contain a fixed set of forced edges.
///
/// Edges are decided in order. An edge whose endpoints are already joined is
/// skipped; otherwise it is included, and excluded only when the remaining
/// edges can still connect everything, so every leaf of the search is a tree.
#[derive(Debug, Clone)]
pub struct SpanningTrees {
    n: usize,
    forced: Vec<(usize, usize)>,
    free: Vec<(usize, usize)>,
}

#[derive(Clone)]
struct State {
    next: usize,
    label: Vec<u32>,
    chosen: Vec<(usize, usize)>,
}

impl SpanningTrees {
    pub fn new(g: &Graph) -> Self {
        SpanningTrees {
            n: g.n(),
            forced: Vec::new(),
            free: g.edge_list(),
        }
    }

    /// Trees containing every edge of `forced`. Yields nothing when the forced
    /// edges contain a cycle or are not edges of `g`.
    pub fn with_forced(g: &Graph, forced: &[(usize, usize)]) -> Self {
        let norm: Vec<_> = forced.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let free = g.edges().filter(|e| !norm.contains(e)).collect();
        let forced = if norm.iter().all(|&(u, v)| g.has_edge(u, v)) {
            norm
        } else {
            // a self-pair can never be merged, which empties the search
            vec![(0, 0)]
        };
        SpanningTrees {
            n: g.n(),
            forced,
            free,
        }
    }

    fn root(&self) -> Option<State> {
        if self.n == 0 {
            return None;
        }
        let mut st = State {
            next: 0,
            label: (0..self.n as u32).collect(),
            chosen: Vec::with_capacity(self.n - 1),
        };
        for &(u, v) in &self.forced {
            if u == v || st.label[u] == st.label[v] {
                return None;
            }
            merge(&mut st.label, u, v);
            st.chosen.push((u, v));
        }
        Some(st)
    }

    fn complete(&self, st: &State) -> bool {
        st.chosen.len() + 1 == self.n
    }

    /// Whether the current forest plus edges from `from` on connects all vertices.
    fn connectable(&self, st: &State, from: usize) -> bool {
        let need = self.n - 1 - st.chosen.len();
        if need == 0 {
            return true;
        }
        let mut up: Vec<u32> = (0..self.n as u32).collect();
        fn find(up: &mut [u32], mut x: u32) -> u32 {
            while up[x as usize] != x {
                up[x as usize] = up[up[x as usize] as usize];
                x = up[x as usize];
            }
            x
        }
        let mut merged = 0;
        for &(u, v) in &self.free[from..] {
            let (a, b) = (find(&mut up, st.label[u]), find(&mut up, st.label[v]));
            if a != b {
                up[a as usize] = b;
                merged += 1;
                if merged == need {
                    return true;
                }
            }
        }
        false
    }

    /// Children of an internal search node; `None` when `st` is a leaf.
    fn children(&self, st: &State) -> Option<Vec<State>> {
        if self.complete(st) || st.next >= self.free.len() {
            return None;
        }
        let mut i = st.next;
        while i < self.free.len() {
            let (u, v) = self.free[i];
            if st.label[u] != st.label[v] {
                break;
            }
            i += 1;
        }
        if i == self.free.len() {
            return Some(Vec::new());
        }
        let (u, v) = self.free[i];
        let mut out = Vec::with_capacity(2);
        let mut inc = st.clone();
        merge(&mut inc.label, u, v);
        inc.chosen.push((u, v));
        inc.next = i + 1;
        out.push(inc);
        if self.connectable(st, i + 1) {
            let mut exc = st.clone();
            exc.next = i + 1;
            out.push(exc);
        }
        Some(out)
    }

    fn walk(&self, st: &mut State, f: &mut dyn FnMut(&[(usize, usize)])) {
        if self.complete(st) {
            f(&st.chosen);
            return;
        }
        let mut i = st.next;
        while i < self.free.len() && {
            let (u, v) = self.free[i];
            st.label[u] == st.label[v]
        } {
            i += 1;
        }
        if i == self.free.len() {
            return;
        }
        let (u, v) = self.free[i];
        let keep_next = st.next;
        let exclude_ok = self.connectable(st, i + 1);

        let (lu, lv) = (st.label[u], st.label[v]);
        let moved: Vec<usize> = (0..self.n).filter(|&x| st.label[x] == lv).collect();
        for &x in &moved {
            st.label[x] = lu;
        }
        st.chosen.push((u, v));
        st.next = i + 1;
        self.walk(st, f);
        st.chosen.pop();
        for &x in &moved {
            st.label[x] = lv;
        }

        if exclude_ok {
            st.next = i + 1;
            self.walk(st, f);
        }
        st.next = keep_next;
    }

    /// Calls `f` once per spanning tree with its edge list (forced edges first).
    pub fn for_each(&self, mut f: impl FnMut(&[(usize, usize)])) {
        if let Some(mut st) = self.root() {
            self.walk(&mut st, &mut f);
        }
    }

    /// Splits the search into independent subproblems.
    fn frontier(&self, target: usize) -> Vec<State> {
        let Some(root) = self.root() else {
            return Vec::new();
        };
        let mut layer = vec![root];
        loop {
            if layer.len() >= target {
                return layer;
            }
            let mut next = Vec::with_capacity(layer.len() * 2);
            let mut grew = false;
            for st in layer {
                match self.children(&st) {
                    Some(kids) => {
                        grew = true;
                        next.extend(kids);
                    }
                    None => next.push(st),
                }
            }
            layer = next;
            if !grew {
                return layer;
            }
        }
    }

    /// Parallel fold over all trees: each worker folds its share starting from
    /// `identity()`, and partial results are merged with `combine`.
    pub fn fold<A, I, F, C>(&self, identity: I, fold: F, combine: C) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        F: Fn(&mut A, &[(usize, usize)]) + Sync + Send,
        C: Fn(A, A) -> A + Sync + Send,
    {
        let tasks = self.frontier(8 * par::threads().max(1));
        let parts = par::map_owned(tasks, |mut st| {
            let mut acc = identity();
            self.walk(&mut st, &mut |edges| fold(&mut acc, edges));
            acc
        });
        parts.into_iter().fold(identity(), combine)
    }

    pub fn count(&self) -> u64 {
        self.fold(|| 0u64, |c, _| *c += 1, |a, b| a + b)
    }

    pub fn collect(&self) -> Vec<SpanningTree> {
        let mut out = Vec::new();
        self.for_each(|edges| {
            out.push(SpanningTree::from_edges(self.n, edges.to_vec()).expect("enumerated trees are valid"))
        });
        out
    }
}

fn merge(label: &mut [u32], u: usize, v: usize) {
    let (keep, gone) = (label[u], label[v]);
    for l in label.iter_mut() {
        if *l == gone {
            *l = keep;
        }
    }
}

/// Every spanning tree of `g`, each exactly once.
pub fn enumerate_spanning_trees(g: &Graph) -> Result<Vec<SpanningTree>> {
    enumerate_spanning_trees_with_limit(g, max_oracle_n())
}

pub fn enumerate_spanning_trees_with_limit(g: &Graph, limit: usize) -> Result<Vec<SpanningTree>> {
    guard(g, limit)?;
    Ok(SpanningTrees::new(g).collect())
}

/// Number of spanning trees by the matrix-tree theorem, using fraction-free
/// Gaussian elimination on a reduced Laplacian.
pub fn count_spanning_trees(g: &Graph) -> Result<u64> {
    count_spanning_trees_with_limit(g, max_oracle_n())
}

pub fn count_spanning_trees_with_limit(g: &Graph, limit: usize) -> Result<u64> {
    guard(g, limit)?;
    let k = g.n() - 1;
    if k == 0 {
        return Ok(1);
    }
    let mut a = vec![vec![0i128; k]; k];
    for v in 1..g.n() {
        a[v - 1][v - 1] = g.degree(v) as i128;
        for &w in g.neighbors(v) {
            if w >= 1 {
                a[v - 1][w - 1] = -1;
            }
        }
    }
    let overflow = || Error::TooLarge {
        what: "spanning tree count",
        actual: g.n(),
        limit,
    };
    let mut prev = 1i128;
    let mut sign = 1i128;
    for i in 0..k {
        if a[i][i] == 0 {
            let Some(p) = (i + 1..k).find(|&r| a[r][i] != 0) else {
                return Ok(0);
            };
            a.swap(i, p);
            sign = -sign;
        }
        for r in i + 1..k {
            for c in i + 1..k {
                let x = a[r][c]
                    .checked_mul(a[i][i])
                    .and_then(|x| x.checked_sub(a[r][i].checked_mul(a[i][c])?))
                    .ok_or_else(overflow)?;
                a[r][c] = x / prev;
            }
            a[r][i] = 0;
        }
        prev = a[i][i];
    }
    u64::try_from(sign * a[k - 1][k - 1]).map_err(|_| overflow())
}

/// Minimum-Wiener spanning tree by exhaustive search. Among co-optimal trees
/// the one with the lexicographically smallest sorted edge list wins.
pub fn mad_tree_bruteforce(g: &Graph) -> Result<(SpanningTree, u64)> {
    mad_tree_bruteforce_with_limit(g, max_oracle_n())
}

pub fn mad_tree_bruteforce_with_limit(g: &Graph, limit: usize) -> Result<(SpanningTree, u64)> {
    guard(g, limit)?;
    let n = g.n();
    let best = SpanningTrees::new(g).fold(
        || None::<(u64, Vec<(usize, usize)>)>,
        |best, edges| {
            let w = edge_list_wiener(n, edges);
            match best {
                Some((bw, _)) if w > *bw => {}
                Some((bw, be)) if w == *bw => {
                    let mut e = edges.to_vec();
                    e.sort_unstable();
                    if e < *be {
                        *be = e;
                    }
                }
                _ => {
                    let mut e = edges.to_vec();
                    e.sort_unstable();
                    *best = Some((w, e));
                }
            }
        },
        |a, b| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(a.min(b)),
        },
    );
    let (w, edges) = best.expect("connected graphs have a spanning tree");
    Ok((SpanningTree::from_edges(n, edges)?, w))
}

/// Wiener index of a tree given as an unchecked edge list on `0..n`.
pub(crate) fn edge_list_wiener(n: usize, edges: &[(usize, usize)]) -> u64 {
    if n <= 1 {
        return 0;
    }
    let mut deg = vec![0u32; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    // xor-linked trees: peel leaves, each leaf's neighbor is the xor of its list
    let mut nb = vec![0usize; n];
    for &(u, v) in edges {
        nb[u] ^= v;
        nb[v] ^= u;
    }
    let mut size = vec![1u64; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut total = 0u64;
    let mut peeled = 0;
    let nn = n as u64;
    while let Some(v) = stack.pop() {
        if peeled + 1 == n {
            break;
        }
        if deg[v] != 1 {
            continue;
        }
        peeled += 1;
        deg[v] = 0;
        let p = nb[v];
        total += size[v] * (nn - size[v]);
        size[p] += size[v];
        nb[p] ^= v;
        deg[p] -= 1;
        if deg[p] == 1 {
            stack.push(p);
        }
    }
    total
}
