use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::util::UnionFind;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDecomposition(msg.into())
}

/// Bags (sorted vertex lists) connected by tree edges between bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    fn check_tree_shape(&self) -> Result<()> {
        let k = self.bags.len();
        if k == 0 {
            return Err(invalid("no bags"));
        }
        if self.edges.len() + 1 != k {
            return Err(invalid(format!(
                "{} bags need {} tree edges, found {}",
                k,
                k - 1,
                self.edges.len()
            )));
        }
        let mut uf = UnionFind::new(k);
        for &(a, b) in &self.edges {
            if a >= k || b >= k {
                return Err(invalid(format!("tree edge {a}-{b} names a missing bag")));
            }
            if !uf.union(a, b) {
                return Err(invalid(format!("tree edge {a}-{b} closes a cycle")));
            }
        }
        Ok(())
    }

    fn check_running_intersection(&self, n: usize) -> Result<()> {
        let k = self.bags.len();
        for v in 0..n {
            let holders: Vec<usize> = (0..k).filter(|&i| self.bags[i].binary_search(&v).is_ok()).collect();
            if holders.is_empty() {
                continue;
            }
            let mut uf = UnionFind::new(k);
            let mut joined = 0;
            for &(a, b) in &self.edges {
                if self.bags[a].binary_search(&v).is_ok()
                    && self.bags[b].binary_search(&v).is_ok()
                    && uf.union(a, b)
                {
                    joined += 1;
                }
            }
            if joined + 1 != holders.len() {
                return Err(invalid(format!("bags holding vertex {v} are not connected")));
            }
        }
        Ok(())
    }

    /// Checks all decomposition axioms against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.check_tree_shape()?;
        let n = g.n();
        let mut seen = vec![false; n];
        for bag in &self.bags {
            for &v in bag {
                if v >= n {
                    return Err(invalid(format!("bag vertex {v} out of range")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(invalid(format!("vertex {v} is in no bag")));
        }
        for (u, v) in g.edges() {
            let covered = self
                .bags
                .iter()
                .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
            if !covered {
                return Err(invalid(format!("edge {u}-{v} is in no bag")));
            }
        }
        self.check_running_intersection(n)
    }

    /// Drops empty bags, reconnecting what is left into a single tree. Sound
    /// because an empty bag separates parts sharing no vertex.
    fn without_empty_bags(&self) -> TreeDecomposition {
        let keep: Vec<usize> = (0..self.bags.len()).filter(|&i| !self.bags[i].is_empty()).collect();
        if keep.len() == self.bags.len() {
            return self.clone();
        }
        let mut index = vec![usize::MAX; self.bags.len()];
        for (j, &i) in keep.iter().enumerate() {
            index[i] = j;
        }
        let mut uf = UnionFind::new(keep.len());
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            if index[a] != usize::MAX && index[b] != usize::MAX && uf.union(index[a], index[b]) {
                edges.push((index[a], index[b]));
            }
        }
        for j in 1..keep.len() {
            if uf.union(0, j) {
                edges.push((0, j));
            }
        }
        TreeDecomposition {
            bags: keep.iter().map(|&i| self.bags[i].clone()).collect(),
            edges,
        }
    }
}

/// Decomposition induced by eliminating vertices in `order`. Bags contained
/// in a neighboring bag are merged away.
pub fn tree_decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    assert_eq!(order.len(), n, "elimination order must list every vertex");
    if n == 0 {
        return TreeDecomposition::new(vec![vec![]], vec![]);
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent_vertex = Vec::with_capacity(n);
    for &v in order {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        parent_vertex.push(nb.iter().copied().min_by_key(|&x| pos[x]));
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, p) in parent_vertex.iter().enumerate() {
        match p {
            Some(x) => edges.push((i, pos[*x])),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    compress(TreeDecomposition { bags, edges })
}

/// Contracts tree edges whose one side is a subset of the other.
fn compress(td: TreeDecomposition) -> TreeDecomposition {
    let TreeDecomposition { mut bags, mut edges } = td;
    let mut alive = vec![true; bags.len()];
    loop {
        let found = edges.iter().enumerate().find_map(|(i, &(a, b))| {
            let sub = |x: &[usize], y: &[usize]| x.iter().all(|v| y.binary_search(v).is_ok());
            if sub(&bags[a], &bags[b]) {
                Some((i, a, b))
            } else if sub(&bags[b], &bags[a]) {
                Some((i, b, a))
            } else {
                None
            }
        });
        let Some((i, gone, into)) = found else { break };
        edges.swap_remove(i);
        for e in &mut edges {
            if e.0 == gone {
                e.0 = into;
            }
            if e.1 == gone {
                e.1 = into;
            }
        }
        alive[gone] = false;
        bags[gone].clear();
    }
    let mut index = vec![usize::MAX; bags.len()];
    let mut kept = Vec::new();
    for (i, b) in bags.into_iter().enumerate() {
        if alive[i] {
            index[i] = kept.len();
            kept.push(b);
        }
    }
    let edges = edges.into_iter().map(|(a, b)| (index[a], index[b])).collect();
    TreeDecomposition { bags: kept, edges }
}

fn greedy_order(g: &Graph, score: impl Fn(&[BTreeSet<usize>], usize) -> usize) -> Vec<usize> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .min_by_key(|&v| (score(&adj, v), adj[v].len(), v))
            .expect("vertices remain");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        done[v] = true;
        order.push(v);
    }
    order
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Min-fill elimination heuristic (ties: smaller degree, then smaller id).
pub fn heuristic_tree_decomposition(g: &Graph) -> TreeDecomposition {
    tree_decomposition_from_order(g, &greedy_order(g, fill_in))
}

/// Min-degree elimination heuristic (ties: smaller id).
pub fn min_degree_tree_decomposition(g: &Graph) -> TreeDecomposition {
    tree_decomposition_from_order(g, &greedy_order(g, |adj, v| adj[v].len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition: leaves hold one vertex, introduce and forget
/// nodes change the bag by one vertex, join nodes have two children with the
/// same bag, and the root bag holds a single vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|x| x.bag.len()).max().unwrap_or(1) - 1
    }

    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Checks the local shape rules of every node.
    pub fn validate(&self) -> Result<()> {
        for (i, node) in self.nodes.iter().enumerate() {
            let kids: Vec<&NiceNode> = node.children.iter().map(|&c| &self.nodes[c]).collect();
            let ok = match node.kind {
                NodeKind::Leaf => kids.is_empty() && node.bag.len() == 1,
                NodeKind::Introduce(v) => {
                    kids.len() == 1 && {
                        let mut b = kids[0].bag.clone();
                        b.push(v);
                        b.sort_unstable();
                        !kids[0].bag.contains(&v) && b == node.bag
                    }
                }
                NodeKind::Forget(v) => {
                    kids.len() == 1 && {
                        let mut b = node.bag.clone();
                        b.push(v);
                        b.sort_unstable();
                        !node.bag.contains(&v) && b == kids[0].bag
                    }
                }
                NodeKind::Join => kids.len() == 2 && kids.iter().all(|k| k.bag == node.bag),
            };
            if !ok {
                return Err(invalid(format!("node {i} breaks the {:?} rules", node.kind)));
            }
        }
        if self.nodes[self.root].bag.len() != 1 {
            return Err(invalid("root bag must hold one vertex"));
        }
        Ok(())
    }
}

/// Expands a tree decomposition into a nice one of the same width, rooted at
/// the first bag.
pub fn to_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    td.check_tree_shape()?;
    let max_v = td.bags.iter().flatten().max().map_or(0, |&v| v + 1);
    td.check_running_intersection(max_v)?;
    let td = td.without_empty_bags();
    if td.bags.is_empty() || td.bags[0].is_empty() {
        return Err(invalid("decomposition has no vertices"));
    }
    let k = td.bags.len();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &td.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // iterative post-order from bag 0
    let mut parent = vec![usize::MAX; k];
    let mut order = vec![0];
    let mut seen = vec![false; k];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        i += 1;
        for &c in &adj[t] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = t;
                order.push(c);
            }
        }
    }
    let mut nice = NiceTreeDecomposition {
        nodes: Vec::new(),
        root: 0,
    };
    let mut top = vec![usize::MAX; k];
    for &t in order.iter().rev() {
        let bag = &td.bags[t];
        let kids: Vec<usize> = adj[t].iter().copied().filter(|&c| parent[c] == t).collect();
        let mut heads = Vec::with_capacity(kids.len().max(1));
        if kids.is_empty() {
            let mut id = nice.push(NodeKind::Leaf, vec![bag[0]], vec![]);
            let mut cur = vec![bag[0]];
            for &v in &bag[1..] {
                cur.push(v);
                cur.sort_unstable();
                id = nice.push(NodeKind::Introduce(v), cur.clone(), vec![id]);
            }
            heads.push(id);
        }
        for c in kids {
            heads.push(morph(&mut nice, top[c], &td.bags[c], bag));
        }
        let mut id = heads[0];
        for &h in &heads[1..] {
            id = nice.push(NodeKind::Join, bag.clone(), vec![id, h]);
        }
        top[t] = id;
    }
    let mut id = top[0];
    let mut cur = td.bags[0].clone();
    while cur.len() > 1 {
        let v = cur.pop().expect("bag is non-empty");
        id = nice.push(NodeKind::Forget(v), cur.clone(), vec![id]);
    }
    nice.root = id;
    nice.validate()?;
    Ok(nice)
}

/// Chain of forget/introduce nodes turning bag `from` into bag `to`.
fn morph(nice: &mut NiceTreeDecomposition, mut id: usize, from: &[usize], to: &[usize]) -> usize {
    let mut cur = from.to_vec();
    let gone: Vec<usize> = from.iter().copied().filter(|v| to.binary_search(v).is_err()).collect();
    let new: Vec<usize> = to.iter().copied().filter(|v| from.binary_search(v).is_err()).collect();
    let mut new = new.into_iter();
    for v in gone {
        if cur.len() == 1 {
            // keep the bag non-empty when the two bags are disjoint
            let w = new.next().expect("target bag is non-empty");
            cur.push(w);
            cur.sort_unstable();
            id = nice.push(NodeKind::Introduce(w), cur.clone(), vec![id]);
        }
        cur.retain(|&x| x != v);
        id = nice.push(NodeKind::Forget(v), cur.clone(), vec![id]);
    }
    for w in new {
        cur.push(w);
        cur.sort_unstable();
        id = nice.push(NodeKind::Introduce(w), cur.clone(), vec![id]);
    }
    id
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heuristic_widths() {
        let t = Graph::path(7);
        let td = heuristic_tree_decomposition(&t);
        td.validate(&t).unwrap();
        assert_eq!(td.width(), 1);
        for n in 3..9 {
            let c = Graph::cycle(n);
            let td = heuristic_tree_decomposition(&c);
            td.validate(&c).unwrap();
            assert_eq!(td.width(), 2);
        }
        let k5 = Graph::complete(5);
        let td = heuristic_tree_decomposition(&k5);
        td.validate(&k5).unwrap();
        assert_eq!(td.width(), 4);
        assert_eq!(td.bags().len(), 1);
    }

    #[test]
    fn validation_catches_defects() {
        let g = Graph::path(3);
        let ok = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        ok.validate(&g).unwrap();
        let missing_edge = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert!(missing_edge.validate(&g).is_err());
        let broken = TreeDecomposition::new(
            vec![vec![0, 1], vec![2], vec![1, 2]],
            vec![(0, 1), (1, 2)],
        );
        assert!(broken.validate(&g).is_err());
        let forest = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![]);
        assert!(forest.validate(&g).is_err());
    }

    #[test]
    fn nice_single_bag() {
        let nice = to_nice(&TreeDecomposition::new(vec![vec![4]], vec![])).unwrap();
        assert_eq!(nice.nodes.len(), 1);
        assert_eq!(nice.nodes[nice.root].kind, NodeKind::Leaf);
    }

    #[test]
    fn nice_single_edge() {
        let nice = to_nice(&TreeDecomposition::new(vec![vec![0, 1]], vec![])).unwrap();
        let kinds: Vec<NodeKind> = nice.nodes.iter().map(|x| x.kind).collect();
        assert_eq!(kinds, vec![NodeKind::Leaf, NodeKind::Introduce(1), NodeKind::Forget(1)]);
        assert_eq!(nice.nodes[nice.root].bag, vec![0]);
    }

    #[test]
    fn nice_path_of_bags_has_no_joins() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]], vec![(0, 1), (1, 2)]);
        let nice = to_nice(&td).unwrap();
        assert!(nice.nodes.iter().all(|x| x.kind != NodeKind::Join));
        assert_eq!(nice.width(), 1);
    }

    #[test]
    fn nice_star_of_bags_joins() {
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = to_nice(&td).unwrap();
        assert_eq!(nice.nodes.iter().filter(|x| x.kind == NodeKind::Join).count(), 2);
        let forgets: Vec<usize> = nice
            .nodes
            .iter()
            .filter_map(|x| match x.kind {
                NodeKind::Forget(v) => Some(v),
                _ => None,
            })
            .collect();
        assert_eq!(forgets.len(), 3);
    }

    #[test]
    fn empty_bags_are_dropped() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![], vec![2, 3]], vec![(0, 1), (1, 2)]);
        let nice = to_nice(&td).unwrap();
        nice.validate().unwrap();
        assert!(nice.nodes.iter().all(|x| !x.bag.is_empty()));
    }
}
