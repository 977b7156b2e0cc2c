//! Instance generators: the X3C to split-graph reduction with its exact
//! budget, and seeded random families matched to each solver's parameter.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::InfeasibleParameters(msg.into())
}

/// Exact cover by 3-sets: universe `0..3q` and a list of triples. Triples are
/// stored sorted; repeated triples are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct X3CInstance {
    q: usize,
    sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(q: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        let mut norm = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            if s[2] >= 3 * q {
                return Err(Error::InvalidX3C(format!("element {} outside universe", s[2])));
            }
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::InvalidX3C(format!("set {s:?} repeats an element")));
            }
            norm.push(s);
        }
        Ok(X3CInstance { q, sets: norm })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// Largest number of sets any element occurs in.
    pub fn max_occurrence(&self) -> usize {
        let mut occ = vec![0; 3 * self.q];
        for s in &self.sets {
            for &x in s {
                occ[x] += 1;
            }
        }
        occ.into_iter().max().unwrap_or(0)
    }
}

/// Split graph and budget produced from an X3C instance. Set vertices come
/// first (`0..s`, a clique), element vertices follow (`s..s+3q`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub graph: Graph,
    pub budget: u64,
    pub q: usize,
    pub s: usize,
    pub d_cc: u64,
    pub d_cx: u64,
    pub d_xx: u64,
}

pub fn reduce_x3c(x: &X3CInstance) -> Result<ReducedInstance> {
    let (q, s) = (x.q, x.sets.len());
    if q == 0 {
        return Err(Error::InvalidX3C("empty universe".into()));
    }
    if s < q {
        return Err(Error::InvalidX3C(format!(
            "{s} sets cannot cover {} elements",
            3 * q
        )));
    }
    let mut covered = vec![false; 3 * q];
    let mut edges = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            edges.push((i, j));
        }
        for &e in &x.sets[i] {
            covered[e] = true;
            edges.push((i, s + e));
        }
    }
    if let Some(e) = covered.iter().position(|&c| !c) {
        return Err(Error::InvalidX3C(format!("element {} is in no set", e + 1)));
    }
    let graph = Graph::from_edges(s + 3 * q, &edges)?;
    let (qi, si) = (q as i64, s as i64);
    let d_cc = (si - 1) * (si - 1);
    let d_cx = 3 * (1 + 2 * (si - 1)) + (3 * qi - 3) * (3 + 3 * (si - 2));
    let d_xx = 6 + 9 * (3 * qi - 3) + 2 * (3 * qi - 3) * (3 * qi - 5);
    let (d_cc, d_cx, d_xx) = (d_cc as u64, d_cx as u64, d_xx as u64);
    Ok(ReducedInstance {
        graph,
        budget: d_cc + d_cx + d_xx,
        q,
        s,
        d_cc,
        d_cx,
        d_xx,
    })
}

/// Brute-force X3C decision: picks the set covering the smallest uncovered
/// element and recurses.
pub fn x3c_has_cover(x: &X3CInstance) -> bool {
    fn rec(sets: &[[usize; 3]], covered: &mut Vec<bool>) -> bool {
        let Some(e) = covered.iter().position(|&c| !c) else {
            return true;
        };
        for s in sets.iter().filter(|s| s.contains(&e)) {
            if s.iter().any(|&y| covered[y]) {
                continue;
            }
            for &y in s {
                covered[y] = true;
            }
            let ok = rec(sets, covered);
            for &y in s {
                covered[y] = false;
            }
            if ok {
                return true;
            }
        }
        false
    }
    rec(&x.sets, &mut vec![false; 3 * x.q])
}

fn random_triple(r: &mut ChaCha8Rng, universe: usize) -> [usize; 3] {
    let picked = rand::seq::index::sample(r, universe, 3);
    [picked.index(0), picked.index(1), picked.index(2)]
}

/// Random X3C instance. With `planted`, `q` disjoint covering triples are
/// hidden among the sets; otherwise sets are uniform triples, resampled until
/// every element is covered.
pub fn gen_x3c(q: usize, s: usize, planted: bool, seed: u64) -> Result<X3CInstance> {
    if q == 0 {
        return Err(infeasible("q must be positive"));
    }
    if s < q {
        return Err(infeasible(format!("need s >= q, got s={s}, q={q}")));
    }
    let mut r = rng(seed);
    let u = 3 * q;
    if planted {
        let mut perm: Vec<usize> = (0..u).collect();
        perm.shuffle(&mut r);
        let mut sets: Vec<[usize; 3]> = perm.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        while sets.len() < s {
            sets.push(random_triple(&mut r, u));
        }
        sets.shuffle(&mut r);
        return X3CInstance::new(q, sets);
    }
    for _ in 0..10_000 {
        let sets: Vec<_> = (0..s).map(|_| random_triple(&mut r, u)).collect();
        let mut covered = vec![false; u];
        sets.iter().flatten().for_each(|&e| covered[e] = true);
        if covered.iter().all(|&c| c) {
            return X3CInstance::new(q, sets);
        }
    }
    Err(infeasible(format!("no covering collection found for q={q}, s={s}")))
}

/// Joins the components of `edges` on `0..n` by random extra edges.
fn connect(n: usize, edges: &mut Vec<(usize, usize)>, r: &mut ChaCha8Rng) {
    let g = Graph::from_edges(n, edges).expect("generator edges are simple");
    let comps = g.components();
    for w in comps.windows(2) {
        let a = w[0][r.gen_range(0..w[0].len())];
        let b = w[1][r.gen_range(0..w[1].len())];
        edges.push((a, b));
    }
}

/// Erdős–Rényi `G(n, p)` made connected by linking its components.
pub fn gen_random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(infeasible("n must be positive"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(infeasible(format!("edge probability {p} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    connect(n, &mut edges, &mut r);
    Graph::from_edges(n, &edges)
}

/// Cotree of a cograph: leaves are vertices, series nodes join their children
/// completely, parallel nodes take disjoint unions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cotree {
    Leaf(usize),
    Series(Vec<Cotree>),
    Parallel(Vec<Cotree>),
}

impl Cotree {
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort_unstable();
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            Cotree::Leaf(v) => out.push(*v),
            Cotree::Series(c) | Cotree::Parallel(c) => c.iter().for_each(|t| t.collect(out)),
        }
    }

    pub fn graph(&self, n: usize) -> Graph {
        let mut edges = Vec::new();
        self.add_edges(&mut edges);
        Graph::from_edges(n, &edges).expect("cotree edges are simple")
    }

    fn add_edges(&self, edges: &mut Vec<(usize, usize)>) {
        match self {
            Cotree::Leaf(_) => {}
            Cotree::Parallel(c) => c.iter().for_each(|t| t.add_edges(edges)),
            Cotree::Series(c) => {
                c.iter().for_each(|t| t.add_edges(edges));
                let parts: Vec<_> = c.iter().map(Cotree::vertices).collect();
                for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        for &u in &parts[i] {
                            for &v in &parts[j] {
                                edges.push((u, v));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cograph {
    pub graph: Graph,
    pub cotree: Cotree,
}

/// Random connected cograph on `n` vertices; the cotree root is a series node
/// whenever `n >= 2`.
pub fn gen_cograph(n: usize, seed: u64) -> Result<Cograph> {
    if n == 0 {
        return Err(infeasible("n must be positive"));
    }
    let mut r = rng(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut r);
    fn build(ids: &[usize], series: bool, r: &mut ChaCha8Rng) -> Cotree {
        if ids.len() == 1 {
            return Cotree::Leaf(ids[0]);
        }
        let parts = r.gen_range(2..=ids.len().min(4));
        let mut cuts: Vec<usize> = rand::seq::index::sample(r, ids.len() - 1, parts - 1)
            .into_iter()
            .map(|c| c + 1)
            .collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(ids.len());
        let kids = cuts
            .windows(2)
            .map(|w| build(&ids[w[0]..w[1]], !series, r))
            .collect();
        if series {
            Cotree::Series(kids)
        } else {
            Cotree::Parallel(kids)
        }
    }
    let cotree = build(&ids, true, &mut r);
    Ok(Cograph {
        graph: cotree.graph(n),
        cotree,
    })
}

/// Random `k`-tree on `n` vertices with up to `extra_removals` edges deleted
/// (bridges are never removed, so the result stays connected). Vertex ids
/// are shuffled.
pub fn gen_partial_ktree(n: usize, k: usize, extra_removals: usize, seed: u64) -> Result<Graph> {
    if n == 0 || k == 0 {
        return Err(infeasible("n and k must be positive"));
    }
    let mut r = rng(seed);
    let base = n.min(k + 1);
    let mut edges = Vec::new();
    for u in 0..base {
        for v in u + 1..base {
            edges.push((u, v));
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    if n > k {
        for skip in 0..=k {
            cliques.push((0..=k).filter(|&x| x != skip).collect());
        }
    }
    for v in base..n {
        let c = cliques[r.gen_range(0..cliques.len())].clone();
        for &u in &c {
            edges.push((u, v));
        }
        for skip in 0..k {
            let mut nc: Vec<usize> = c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
            nc.push(v);
            cliques.push(nc);
        }
    }
    edges.shuffle(&mut r);
    let mut removed = 0;
    let mut i = 0;
    while removed < extra_removals && i < edges.len() {
        let e = edges.remove(i);
        if Graph::from_edges(n, &edges).expect("simple").is_connected() {
            removed += 1;
        } else {
            edges.insert(i, e);
            i += 1;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut r);
    let relabeled: Vec<_> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(n, &relabeled)
}

/// Split graph: a clique on `0..n_clique` plus an independent set whose
/// vertices see each clique vertex with probability `p` (at least one).
pub fn gen_split(n_clique: usize, n_ind: usize, p: f64, seed: u64) -> Result<Graph> {
    if n_clique == 0 && n_ind != 1 {
        return Err(infeasible("an empty clique only fits a single vertex"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(infeasible(format!("edge probability {p} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n_clique {
        for v in u + 1..n_clique {
            edges.push((u, v));
        }
    }
    for x in n_clique..n_clique + n_ind {
        let mut any = false;
        for c in 0..n_clique {
            if r.gen_bool(p) {
                edges.push((c, x));
                any = true;
            }
        }
        if !any && n_clique > 0 {
            edges.push((r.gen_range(0..n_clique), x));
        }
    }
    Graph::from_edges(n_clique + n_ind, &edges)
}

/// Degree-sequence split-graph test (Hammer and Simeone).
pub fn is_split_graph(g: &Graph) -> bool {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let m = (0..d.len()).filter(|&i| d[i] >= i).count();
    let lhs: usize = d[..m].iter().sum();
    let rhs: usize = m * m.saturating_sub(1) + d[m..].iter().sum::<usize>();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{wiener_graph, SpanningTree};

    #[test]
    fn reduction_single_set() {
        let x = X3CInstance::new(1, vec![[0, 1, 2]]).unwrap();
        let red = reduce_x3c(&x).unwrap();
        assert_eq!((red.d_cc, red.d_cx, red.d_xx), (0, 3, 6));
        assert_eq!(red.budget, 9);
        let t = SpanningTree::from_tree_graph(&red.graph).unwrap();
        assert_eq!(t.wiener(), 9);
    }

    #[test]
    fn reduction_two_sets() {
        let x = X3CInstance::new(1, vec![[0, 1, 2], [0, 1, 2]]).unwrap();
        let red = reduce_x3c(&x).unwrap();
        assert_eq!((red.d_cc, red.d_cx, red.d_xx), (1, 9, 6));
        assert_eq!(red.budget, 16);
        assert_eq!(red.graph.n(), 5);
        assert!(is_split_graph(&red.graph));
    }

    #[test]
    fn reduction_rejects_bad_instances() {
        let uncovered = X3CInstance::new(2, vec![[0, 1, 2], [0, 1, 3]]).unwrap();
        assert!(matches!(reduce_x3c(&uncovered), Err(Error::InvalidX3C(_))));
        let short = X3CInstance::new(2, vec![[0, 1, 2]]).unwrap();
        assert!(matches!(reduce_x3c(&short), Err(Error::InvalidX3C(_))));
        assert!(X3CInstance::new(1, vec![[0, 0, 1]]).is_err());
        assert!(X3CInstance::new(1, vec![[0, 1, 3]]).is_err());
    }

    #[test]
    fn x3c_generation() {
        let x = gen_x3c(2, 3, true, 5).unwrap();
        assert_eq!(x.sets().len(), 3);
        assert!(x3c_has_cover(&x));
        let one = gen_x3c(1, 1, true, 0).unwrap();
        assert_eq!(one.sets(), &[[0, 1, 2]]);
        assert_eq!(gen_x3c(3, 5, false, 9).unwrap(), gen_x3c(3, 5, false, 9).unwrap());
        assert!(gen_x3c(3, 2, true, 0).is_err());
    }

    #[test]
    fn x3c_brute_force() {
        let yes = X3CInstance::new(2, vec![[0, 1, 2], [1, 2, 3], [3, 4, 5]]).unwrap();
        assert!(x3c_has_cover(&yes));
        let no = X3CInstance::new(2, vec![[0, 1, 2], [2, 3, 4], [1, 4, 5]]).unwrap();
        assert!(!x3c_has_cover(&no));
    }

    #[test]
    fn families() {
        assert_eq!(gen_cograph(1, 3).unwrap().graph.n(), 1);
        let t = gen_partial_ktree(12, 1, 0, 4).unwrap();
        assert!(t.is_tree());
        assert_eq!(gen_random_connected(5, 1.0, 1).unwrap(), Graph::complete(5));
        for seed in 0..20 {
            assert!(gen_random_connected(9, 0.1, seed).unwrap().is_connected());
            let c = gen_cograph(15, seed).unwrap();
            assert!(c.graph.is_connected());
            assert_eq!(c.cotree.vertices(), (0..15).collect::<Vec<_>>());
            let kt = gen_partial_ktree(14, 2, 5, seed).unwrap();
            assert!(kt.is_connected());
            assert_eq!(kt.m(), 2 * 14 - 3 - 5);
            let s = gen_split(4, 6, 0.3, seed).unwrap();
            assert!(s.is_connected() && is_split_graph(&s));
        }
        assert!(!is_split_graph(&Graph::cycle(4)));
        assert!(wiener_graph(&gen_split(0, 1, 0.5, 0).unwrap()).is_ok());
    }
}
