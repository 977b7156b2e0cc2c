//! MAD trees by branching over a minimum modular partition.
//!
//! Some optimal tree is a poly-star: each module has at most one vertex of
//! tree degree two or more. For every root module, every maximum-degree root
//! in it, and every quotient spanning tree containing the root module's full
//! quotient star, one poly-star is built; the best of them is optimal.

use crate::error::{Error, Result};
use crate::graph::{bfs_adj, Graph, SpanningTree};
use crate::oracle::SpanningTrees;
use crate::par;

/// Partition of the vertex set into modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularPartition {
    modules: Vec<Vec<usize>>,
    module_of: Vec<usize>,
}

impl ModularPartition {
    /// Checks that `modules` partitions `0..g.n()` into at least two
    /// non-empty modules of `g`.
    pub fn new(g: &Graph, modules: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Error::InvalidPartition(m);
        let n = g.n();
        let mut module_of = vec![usize::MAX; n];
        let mut modules = modules;
        for (i, m) in modules.iter_mut().enumerate() {
            if m.is_empty() {
                return Err(bad(format!("module {i} is empty")));
            }
            m.sort_unstable();
            for &v in m.iter() {
                if v >= n {
                    return Err(bad(format!("vertex {v} out of range")));
                }
                if module_of[v] != usize::MAX {
                    return Err(bad(format!("vertex {v} is in two modules")));
                }
                module_of[v] = i;
            }
        }
        if let Some(v) = module_of.iter().position(|&m| m == usize::MAX) {
            return Err(bad(format!("vertex {v} is in no module")));
        }
        if n >= 2 && modules.len() < 2 {
            return Err(bad("need at least two modules".into()));
        }
        for (i, m) in modules.iter().enumerate() {
            if !is_module(g, m) {
                return Err(bad(format!("part {i} is not a module")));
            }
        }
        Ok(ModularPartition { modules, module_of })
    }

    pub fn modules(&self) -> &[Vec<usize>] {
        &self.modules
    }

    pub fn module_of(&self, v: usize) -> usize {
        self.module_of[v]
    }

    pub fn k(&self) -> usize {
        self.modules.len()
    }
}

/// Whether every vertex outside `set` sees all of it or none of it.
pub fn is_module(g: &Graph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    let mut hits = vec![0usize; g.n()];
    for &v in set {
        for &x in g.neighbors(v) {
            hits[x] += 1;
        }
    }
    (0..g.n()).all(|x| inside[x] || hits[x] == 0 || hits[x] == set.len())
}

/// Smallest module containing `seed`, grown by adding splitters.
fn module_closure(g: &Graph, seed: &[usize]) -> Vec<bool> {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut members = Vec::new();
    for &v in seed {
        if !inside[v] {
            inside[v] = true;
            members.push(v);
        }
    }
    let mut hits = vec![0usize; n];
    for &v in &members {
        for &x in g.neighbors(v) {
            hits[x] += 1;
        }
    }
    loop {
        let splitters: Vec<usize> = (0..n)
            .filter(|&x| !inside[x] && hits[x] != 0 && hits[x] != members.len())
            .collect();
        if splitters.is_empty() {
            return inside;
        }
        for x in splitters {
            inside[x] = true;
            members.push(x);
            for &y in g.neighbors(x) {
                hits[y] += 1;
            }
        }
    }
}

/// Partition with the fewest modules: the components when `g` is
/// disconnected, two modules when the complement is disconnected, and the
/// maximal strong modules otherwise.
pub fn modular_partition(g: &Graph) -> Result<ModularPartition> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall);
    }
    let comps = g.components();
    if comps.len() > 1 {
        return ModularPartition::new(g, comps);
    }
    let co = g.complement().components();
    if co.len() > 1 {
        let first = co[0].clone();
        let rest: Vec<usize> = co[1..].iter().flatten().copied().collect();
        return ModularPartition::new(g, vec![first, rest]);
    }
    let mut module_of = vec![usize::MAX; n];
    let mut modules: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if module_of[v] != usize::MAX {
            continue;
        }
        let mut m = vec![v];
        for u in 0..n {
            if u != v && module_of[u] == usize::MAX {
                let c = module_closure(g, &[u, v]);
                if c.iter().any(|&x| !x) {
                    m.push(u);
                }
            }
        }
        m.sort_unstable();
        for &u in &m {
            module_of[u] = modules.len();
        }
        modules.push(m);
    }
    ModularPartition::new(g, modules)
}

/// Graph on module indices; modules are adjacent when their members are.
pub fn quotient(g: &Graph, p: &ModularPartition) -> Result<Graph> {
    let p = ModularPartition::new(g, p.modules.clone())?;
    let reps: Vec<usize> = p.modules.iter().map(|m| m[0]).collect();
    let mut edges = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if g.has_edge(reps[i], reps[j]) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(reps.len(), &edges)
}

/// Spanning trees of the quotient `q` containing every edge at `i`.
pub fn quotient_trees_with_root_star(q: &Graph, i: usize) -> Vec<Vec<(usize, usize)>> {
    let star: Vec<(usize, usize)> = q.neighbors(i).iter().map(|&j| (i, j)).collect();
    let mut out = Vec::new();
    SpanningTrees::with_forced(q, &star).for_each(|e| {
        let mut e = e.to_vec();
        e.sort_unstable();
        out.push(e);
    });
    out
}

/// How each non-root module picks its designated vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Designation {
    /// Smallest vertex id.
    #[default]
    SmallestId,
    /// Largest degree in the graph, ties to the smallest id.
    MaxDegree,
}

fn designate(g: &Graph, m: &[usize], how: Designation) -> usize {
    match how {
        Designation::SmallestId => m[0],
        Designation::MaxDegree => *m
            .iter()
            .min_by_key(|&&v| (std::cmp::Reverse(g.degree(v)), v))
            .expect("modules are non-empty"),
    }
}

/// One poly-star with the choices that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyStarPlan {
    pub root_module: usize,
    pub root: usize,
    /// Designated vertex of each module; the root for the root module.
    pub designated: Vec<usize>,
    /// Quotient tree over module indices.
    pub quotient_tree: Vec<(usize, usize)>,
    /// Vertex the non-designated members of each module attach to; `None`
    /// for the root module when all its members neighbor the root.
    pub attach: Vec<Option<usize>>,
    pub tree: SpanningTree,
}

/// Builds the poly-star for root module `i`, root `r` and quotient tree
/// `tq` (edges over module indices).
pub fn build_poly_star(
    g: &Graph,
    p: &ModularPartition,
    tq: &[(usize, usize)],
    i: usize,
    r: usize,
    how: Designation,
) -> Result<SpanningTree> {
    Ok(plan_poly_star(g, p, tq, i, r, how)?.tree)
}

pub fn plan_poly_star(
    g: &Graph,
    p: &ModularPartition,
    tq: &[(usize, usize)],
    i: usize,
    r: usize,
    how: Designation,
) -> Result<PolyStarPlan> {
    let bad = |m: String| Error::InvalidPlan(m);
    let k = p.k();
    if i >= k {
        return Err(bad(format!("no module {i}")));
    }
    let mi = &p.modules[i];
    if mi.binary_search(&r).is_err() {
        return Err(bad(format!("root {r} is not in module {i}")));
    }
    let top = mi.iter().map(|&v| g.degree(v)).max().unwrap_or(0);
    if g.degree(r) != top {
        return Err(bad(format!("root {r} does not have maximum degree in its module")));
    }
    let q = quotient(g, p)?;
    let qt = SpanningTree::new(&q, tq.to_vec()).map_err(|e| bad(format!("quotient tree: {e}")))?;
    if q.neighbors(i).iter().any(|&j| !qt.contains_edge(i, j)) {
        return Err(bad("quotient tree misses part of the root star".into()));
    }

    let d: Vec<usize> = (0..k)
        .map(|j| if j == i { r } else { designate(g, &p.modules[j], how) })
        .collect();
    let mut edges: Vec<(usize, usize)> = tq.iter().map(|&(a, b)| (d[a], d[b])).collect();

    // parent of each module on the quotient tree rooted at i
    let qadj = qt.adjacency();
    let mut parent = vec![usize::MAX; k];
    parent[i] = i;
    let mut stack = vec![i];
    while let Some(x) = stack.pop() {
        for &y in &qadj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut attach = vec![None; k];
    for j in (0..k).filter(|&j| j != i) {
        let c = d[parent[j]];
        attach[j] = Some(c);
        edges.extend(p.modules[j].iter().filter(|&&u| u != d[j]).map(|&u| (u, c)));
    }
    edges.extend(mi.iter().filter(|&&u| g.has_edge(u, r)).map(|&u| (u, r)));

    let far: Vec<usize> = mi.iter().copied().filter(|&u| u != r && !g.has_edge(u, r)).collect();
    if !far.is_empty() {
        let n = g.n();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let candidates: Vec<usize> = q.neighbors(i).iter().map(|&j| d[j]).collect();
        let c = candidates
            .iter()
            .copied()
            .min_by_key(|&w| {
                let total: u64 = bfs_adj(n, |x| &adj[x], w).iter().flatten().map(|&x| x as u64).sum();
                (total, w)
            })
            .ok_or_else(|| bad("root module has no neighboring module".into()))?;
        attach[i] = Some(c);
        edges.extend(far.iter().map(|&u| (u, c)));
    }
    let tree = SpanningTree::new(g, edges).map_err(|e| bad(format!("assembled edges are not a spanning tree: {e}")))?;
    Ok(PolyStarPlan {
        root_module: i,
        root: r,
        designated: d,
        quotient_tree: tq.to_vec(),
        attach,
        tree,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularSolution {
    pub tree: SpanningTree,
    pub wiener: u64,
    pub k: usize,
    pub decision: Option<bool>,
    /// Partition and winning plan; absent for the one-vertex graph.
    pub partition: Option<ModularPartition>,
    pub plan: Option<PolyStarPlan>,
}

/// Exact MAD tree via the modular partition. Deterministic: among equal
/// values the lexicographically smallest edge list wins.
pub fn solve_modular(g: &Graph, budget: Option<u64>) -> Result<ModularSolution> {
    solve_modular_with(g, budget, Designation::default())
}

pub fn solve_modular_with(g: &Graph, budget: Option<u64>, how: Designation) -> Result<ModularSolution> {
    g.require_connected()?;
    if g.n() == 1 {
        let tree = SpanningTree::from_edges(1, vec![])?;
        return Ok(ModularSolution {
            tree,
            wiener: 0,
            k: 1,
            decision: budget.map(|_| true),
            partition: None,
            plan: None,
        });
    }
    let p = modular_partition(g)?;
    let q = quotient(g, &p)?;
    let mut plans = Vec::new();
    for i in 0..p.k() {
        let mi = &p.modules[i];
        let top = mi.iter().map(|&v| g.degree(v)).max().expect("modules are non-empty");
        let roots: Vec<usize> = mi.iter().copied().filter(|&v| g.degree(v) == top).collect();
        for tq in quotient_trees_with_root_star(&q, i) {
            for &r in &roots {
                plans.push((i, r, tq.clone()));
            }
        }
    }
    let built = par::map(&plans, |(i, r, tq)| {
        plan_poly_star(g, &p, tq, *i, *r, how).map(|plan| (plan.tree.wiener(), plan))
    });
    let mut best: Option<(u64, PolyStarPlan)> = None;
    for b in built {
        let b = b?;
        if best
            .as_ref()
            .map_or(true, |cur| (b.0, b.1.tree.edges()) < (cur.0, cur.1.tree.edges()))
        {
            best = Some(b);
        }
    }
    let (wiener, plan) = best.expect("every root module has a quotient tree");
    Ok(ModularSolution {
        tree: plan.tree.clone(),
        wiener,
        k: p.k(),
        decision: budget.map(|b| wiener <= b),
        partition: Some(p),
        plan: Some(plan),
    })
}

/// Moves the subtrees hanging at `vb` from `b` to `a` (first tree) and those
/// hanging at `va` from `a` to `b` (second tree). Requires `a != b`, both
/// sets non-empty, every moved vertex adjacent to both `a` and `b` in `g`,
/// `va` (resp. `vb`) tree-adjacent to `a` (resp. `b`), and the tree path
/// from `a` to `b` avoiding both sets. Under these conditions one of the two
/// trees is strictly better than `t`.
pub fn reposition_subtrees(
    g: &Graph,
    t: &SpanningTree,
    a: usize,
    b: usize,
    va: &[usize],
    vb: &[usize],
) -> Result<(SpanningTree, SpanningTree)> {
    let fail = |m: String| Error::HypothesisViolated(m);
    let n = t.n();
    if a >= n || b >= n || a == b {
        return Err(fail("anchors must be two distinct vertices".into()));
    }
    if va.is_empty() || vb.is_empty() {
        return Err(fail("both vertex sets must be non-empty".into()));
    }
    for &v in va.iter().chain(vb) {
        if v >= n || !g.has_edge(v, a) || !g.has_edge(v, b) {
            return Err(fail(format!("vertex {v} is not adjacent to both anchors")));
        }
    }
    if let Some(&v) = va.iter().find(|&&v| !t.contains_edge(a, v)) {
        return Err(fail(format!("{v} is not a tree neighbor of {a}")));
    }
    if let Some(&v) = vb.iter().find(|&&v| !t.contains_edge(b, v)) {
        return Err(fail(format!("{v} is not a tree neighbor of {b}")));
    }
    let path = tree_path(t, a, b);
    if let Some(v) = path.iter().find(|v| va.contains(v) || vb.contains(v)) {
        return Err(fail(format!("tree path between the anchors passes {v}")));
    }
    let rewire = |from: usize, to: usize, moved: &[usize]| {
        let mut edges: Vec<(usize, usize)> = t
            .edges()
            .iter()
            .copied()
            .filter(|&(x, y)| !((x == from && moved.contains(&y)) || (y == from && moved.contains(&x))))
            .collect();
        edges.extend(moved.iter().map(|&v| (to, v)));
        SpanningTree::new(g, edges)
    };
    Ok((rewire(b, a, vb)?, rewire(a, b, va)?))
}

fn tree_path(t: &SpanningTree, a: usize, b: usize) -> Vec<usize> {
    let adj = t.adjacency();
    let mut parent = vec![usize::MAX; t.n()];
    parent[a] = a;
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut path = vec![b];
    let mut x = b;
    while x != a {
        x = parent[x];
        path.push(x);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::mad_tree_bruteforce;

    fn modules(p: &ModularPartition) -> Vec<Vec<usize>> {
        let mut m = p.modules().to_vec();
        m.sort();
        m
    }

    #[test]
    fn partition_examples() {
        let c4 = modular_partition(&Graph::cycle(4)).unwrap();
        assert_eq!(modules(&c4), vec![vec![0, 2], vec![1, 3]]);
        let p4 = modular_partition(&Graph::path(4)).unwrap();
        assert_eq!(p4.k(), 4);
        let k4 = modular_partition(&Graph::complete(4)).unwrap();
        assert_eq!(k4.k(), 2);
        assert_eq!(modular_partition(&Graph::empty(1)), Err(Error::TooSmall));
    }

    #[test]
    fn prime_with_nontrivial_modules() {
        // P4 with vertex 1 blown up into the independent pair {1, 4}
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (0, 4), (4, 2)]).unwrap();
        let p = modular_partition(&g).unwrap();
        assert_eq!(modules(&p), vec![vec![0], vec![1, 4], vec![2], vec![3]]);
    }

    #[test]
    fn quotient_examples() {
        let k4 = Graph::complete(4);
        let p = ModularPartition::new(&k4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(quotient(&k4, &p).unwrap(), Graph::complete(2));
        let c4 = Graph::cycle(4);
        let p = modular_partition(&c4).unwrap();
        assert_eq!(quotient(&c4, &p).unwrap(), Graph::complete(2));
        let p4 = Graph::path(4);
        let p = modular_partition(&p4).unwrap();
        assert_eq!(quotient(&p4, &p).unwrap(), p4);
        assert!(matches!(
            ModularPartition::new(&p4, vec![vec![0, 2], vec![1, 3]]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn quotient_tree_examples() {
        assert_eq!(quotient_trees_with_root_star(&Graph::complete(2), 0).len(), 1);
        assert_eq!(
            quotient_trees_with_root_star(&Graph::complete(3), 0),
            vec![vec![(0, 1), (0, 2)]]
        );
        assert_eq!(quotient_trees_with_root_star(&Graph::path(3), 1).len(), 1);
        assert_eq!(quotient_trees_with_root_star(&Graph::complete(4), 1).len(), 1);
        assert_eq!(quotient_trees_with_root_star(&Graph::cycle(5), 0).len(), 3);
    }

    #[test]
    fn poly_star_examples() {
        let k4 = Graph::complete(4);
        let p = ModularPartition::new(&k4, vec![vec![0], vec![1, 2, 3]]).unwrap();
        let t = build_poly_star(&k4, &p, &[(0, 1)], 0, 0, Designation::SmallestId).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(t.wiener(), 9);

        let c4 = Graph::cycle(4);
        let p = ModularPartition::new(&c4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let t = build_poly_star(&c4, &p, &[(0, 1)], 0, 0, Designation::SmallestId).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 3), (1, 2)]);
        assert_eq!(t.wiener(), 10);

        let k2 = Graph::complete(2);
        let p = modular_partition(&k2).unwrap();
        let t = build_poly_star(&k2, &p, &[(0, 1)], 0, 0, Designation::SmallestId).unwrap();
        assert_eq!(t.wiener(), 1);
    }

    #[test]
    fn poly_star_rejects_bad_plans() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let p = ModularPartition::new(&g, vec![vec![0], vec![1, 2], vec![3]]).unwrap();
        let err = |r: Result<SpanningTree>| matches!(r, Err(Error::InvalidPlan(_)));
        // root of module 1 must have maximum degree there; both do
        assert!(build_poly_star(&g, &p, &[(0, 1), (0, 2)], 1, 1, Designation::SmallestId).is_ok());
        assert!(err(build_poly_star(&g, &p, &[(0, 1), (0, 2)], 1, 3, Designation::SmallestId)));
        assert!(err(build_poly_star(&g, &p, &[(0, 1)], 0, 0, Designation::SmallestId)));
    }

    #[test]
    fn solver_examples() {
        let s = solve_modular(&Graph::complete(4), Some(9)).unwrap();
        assert_eq!((s.wiener, s.decision), (9, Some(true)));
        let s = solve_modular(&Graph::cycle(4), Some(9)).unwrap();
        assert_eq!((s.wiener, s.decision), (10, Some(false)));
        let t = Graph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)]).unwrap();
        let w = crate::graph::wiener_graph(&t).unwrap();
        assert_eq!(solve_modular(&t, Some(w)).unwrap().decision, Some(true));
        assert_eq!(solve_modular(&Graph::empty(1), None).unwrap().wiener, 0);
        assert_eq!(solve_modular(&Graph::empty(3), None).unwrap_err(), Error::DisconnectedGraph);
    }

    #[test]
    fn designation_variants_agree() {
        for seed in 0..30 {
            let g = crate::gen::gen_random_connected(7, 0.5, seed).unwrap();
            let (_, w) = mad_tree_bruteforce(&g).unwrap();
            assert_eq!(solve_modular(&g, None).unwrap().wiener, w);
            assert_eq!(solve_modular_with(&g, None, Designation::MaxDegree).unwrap().wiener, w);
        }
    }

    #[test]
    fn reposition_example() {
        let k4 = Graph::complete(4);
        let t = SpanningTree::new(&k4, vec![(2, 0), (0, 1), (1, 3)]).unwrap();
        let (t1, t2) = reposition_subtrees(&k4, &t, 0, 1, &[2], &[3]).unwrap();
        assert_eq!(t1.edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(t2.edges(), &[(0, 1), (1, 2), (1, 3)]);
        assert_eq!((t1.wiener(), t2.wiener(), t.wiener()), (9, 9, 10));
    }

    #[test]
    fn reposition_symmetric_case_improves_both() {
        // a = 0 and b = 1 are symmetric in the rest of the tree
        let g = Graph::complete(6);
        let t = SpanningTree::new(&g, vec![(0, 1), (0, 2), (1, 3), (0, 4), (1, 5)]).unwrap();
        let (t1, t2) = reposition_subtrees(&g, &t, 0, 1, &[2, 4], &[3, 5]).unwrap();
        assert!(t1.wiener() < t.wiener() && t2.wiener() < t.wiener());
    }

    #[test]
    fn reposition_checks_hypotheses() {
        let p = Graph::path(4);
        let t = SpanningTree::from_tree_graph(&p).unwrap();
        assert!(matches!(
            reposition_subtrees(&p, &t, 1, 2, &[0], &[3]),
            Err(Error::HypothesisViolated(_))
        ));
        let k4 = Graph::complete(4);
        let t = SpanningTree::new(&k4, vec![(2, 0), (0, 1), (1, 3)]).unwrap();
        assert!(matches!(
            reposition_subtrees(&k4, &t, 2, 3, &[0], &[1]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    const ORACLE_TREES: u64 = 2_000_000;

    fn check_structure(g: &Graph, s: &ModularSolution) {
        let (p, plan) = (s.partition.as_ref().unwrap(), s.plan.as_ref().unwrap());
        let adj = s.tree.adjacency();
        for (j, m) in p.modules().iter().enumerate() {
            let internal = m.iter().filter(|&&v| adj[v].len() >= 2).count();
            assert!(internal <= 1, "module {j} has {internal} internal vertices");
            if j != plan.root_module {
                assert!(!m.iter().any(|&u| m.iter().any(|&v| s.tree.contains_edge(u, v))));
            }
        }
        let d = &plan.designated;
        let inside = s.tree.edges().iter().filter(|&&(x, y)| d.contains(&x) && d.contains(&y)).count();
        assert_eq!(inside, p.k() - 1, "designated vertices do not induce a tree");
        assert_eq!(g.n(), s.tree.n());
    }

    #[test]
    fn agrees_with_oracle_on_cographs_and_multipartite_graphs() {
        let mut large = 0;
        for seed in 0..240 {
            let n = 4 + (seed as usize % 9);
            let c = crate::gen::gen_cograph(n, seed).unwrap();
            if crate::oracle::count_spanning_trees(&c.graph).unwrap() > ORACLE_TREES {
                continue;
            }
            large += usize::from(n >= 10);
            let (_, w) = mad_tree_bruteforce(&c.graph).unwrap();
            let s = solve_modular(&c.graph, None).unwrap();
            assert_eq!(s.wiener, w, "cograph seed {seed}");
            check_structure(&c.graph, &s);
        }
        assert!(large >= 10);
        for parts in [&[1, 1][..], &[2, 2], &[1, 5], &[2, 3, 4], &[2, 2, 2, 2], &[1, 1, 1, 7], &[3, 6], &[2, 2, 5]] {
            let g = Graph::complete_multipartite(parts);
            assert!(crate::oracle::count_spanning_trees(&g).unwrap() <= ORACLE_TREES);
            let (_, w) = mad_tree_bruteforce(&g).unwrap();
            let s = solve_modular(&g, None).unwrap();
            assert_eq!(s.wiener, w, "parts {parts:?}");
            check_structure(&g, &s);
        }
    }

    #[test]
    fn random_outputs_are_poly_stars() {
        for seed in 0..40 {
            let g = crate::gen::gen_random_connected(8, 0.45, 100 + seed).unwrap();
            check_structure(&g, &solve_modular(&g, None).unwrap());
        }
    }

    /// All `(a, b)` where both anchors have a movable tree neighbor.
    fn anchor_configurations(g: &Graph, t: &SpanningTree) -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
        let adj = t.adjacency();
        let mut out = Vec::new();
        for a in 0..t.n() {
            for b in 0..t.n() {
                if a == b {
                    continue;
                }
                let path = tree_path(t, a, b);
                let movable = |x: usize, y: usize| -> Vec<usize> {
                    adj[x].iter().copied().filter(|&v| g.has_edge(v, y) && !path.contains(&v)).collect()
                };
                let (ca, cb) = (movable(a, b), movable(b, a));
                if !ca.is_empty() && !cb.is_empty() {
                    out.push((a, b, ca, cb));
                }
            }
        }
        out
    }

    #[test]
    fn common_anchor_never_applies_to_optimal_trees() {
        for seed in 0..40 {
            let g = crate::gen::gen_random_connected(8, 0.5, 300 + seed).unwrap();
            let (t, _) = mad_tree_bruteforce(&g).unwrap();
            assert!(anchor_configurations(&g, &t).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn common_anchor_improves_arbitrary_trees() {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut seen = 0;
        for seed in 0..40 {
            let g = crate::gen::gen_random_connected(7, 0.6, 500 + seed).unwrap();
            let trees = crate::oracle::enumerate_spanning_trees(&g).unwrap();
            for t in trees.choose_multiple(&mut rng, 10) {
                for (a, b, ca, cb) in anchor_configurations(&g, t) {
                    let (t1, t2) = reposition_subtrees(&g, t, a, b, &ca, &cb).unwrap();
                    assert!(t1.wiener().min(t2.wiener()) < t.wiener());
                    let (t1, t2) = reposition_subtrees(&g, t, a, b, &ca[..1], &cb[..1]).unwrap();
                    assert!(t1.wiener().min(t2.wiener()) < t.wiener());
                    seen += 1;
                }
            }
        }
        assert!(seen > 50);
    }
}
