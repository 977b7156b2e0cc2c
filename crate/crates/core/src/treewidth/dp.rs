use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::decomposition::{
    heuristic_tree_decomposition, to_nice, NiceTreeDecomposition, NodeKind, TreeDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{best_bfs_tree, Graph};
use crate::par;

/// Largest supported bag size (pairs of bag positions must fit a `u128`).
pub const MAX_BAG: usize = 16;

type Vals = SmallVec<[u32; 8]>;
type Conns = SmallVec<[u16; 4]>;

/// Position-based table key. `f` has one bit per pair of bag positions,
/// `conns` one bit mask per below connection (kept sorted).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    f: u128,
    conns: Conns,
    abov: Vals,
    below: Vals,
}

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    b * (b - 1) / 2 + a
}

#[inline]
fn pair_bit(i: usize, j: usize) -> u128 {
    1u128 << pair_index(i, j)
}

fn pair_of(k: usize) -> (usize, usize) {
    let mut b = 1;
    while (b + 1) * b / 2 <= k {
        b += 1;
    }
    (k - b * (b - 1) / 2, b)
}

fn pairs(mut f: u128) -> impl Iterator<Item = (usize, usize)> {
    std::iter::from_fn(move || {
        if f == 0 {
            return None;
        }
        let k = f.trailing_zeros() as usize;
        f &= f - 1;
        Some(pair_of(k))
    })
}

/// Rewrites pair bits through a position map (`None` drops the pair).
fn remap_pairs(f: u128, map: impl Fn(usize) -> Option<usize>) -> u128 {
    pairs(f).fold(0, |acc, (i, j)| match (map(i), map(j)) {
        (Some(a), Some(b)) => acc | pair_bit(a, b),
        _ => acc,
    })
}

#[inline]
fn insert_bit(m: u16, p: usize) -> u16 {
    let low = (1u16 << p) - 1;
    (m & low) | ((m & !low) << 1)
}

#[inline]
fn remove_bit(m: u16, p: usize) -> u16 {
    let low = (1u16 << p) - 1;
    (m & low) | ((m >> 1) & !low)
}

/// Tiny union-find over bag positions.
struct Classes([u8; MAX_BAG]);

impl Classes {
    fn new() -> Self {
        let mut a = [0u8; MAX_BAG];
        for (i, x) in a.iter_mut().enumerate() {
            *x = i as u8;
        }
        Classes(a)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] as usize != x {
            self.0[x] = self.0[self.0[x] as usize];
            x = self.0[x] as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[rb] = ra as u8;
        true
    }

    fn with_forest(f: u128) -> Self {
        let mut c = Classes::new();
        for (i, j) in pairs(f) {
            c.union(i, j);
        }
        c
    }
}

/// Unions every connection into `c`; false if some connection closes a
/// cycle with the forest and the connections before it.
fn absorb_connections(c: &mut Classes, conns: &[u16]) -> bool {
    for &m in conns {
        let first = m.trailing_zeros() as usize;
        let mut rest = m & (m - 1);
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !c.union(first, x) {
                return false;
            }
        }
    }
    true
}

/// The structural conditions every reachable entry satisfies: `F` is a
/// forest, connections have at least two members, the forest together with
/// the connections is acyclic, and every `F`-component has mass `n`.
fn admissible(key: &Key, n: u32) -> bool {
    let k = key.abov.len();
    let mut c = Classes::new();
    for (i, j) in pairs(key.f) {
        if j >= k || !c.union(i, j) {
            return false;
        }
    }
    let mut mass = [0u64; MAX_BAG];
    for v in 0..k {
        let r = c.find(v);
        mass[r] += 1 + key.abov[v] as u64 + key.below[v] as u64;
    }
    for v in 0..k {
        if c.find(v) == v && mass[v] != n as u64 {
            return false;
        }
    }
    if key.conns.iter().any(|&m| m.count_ones() < 2 || (m as u32 >> k) != 0) {
        return false;
    }
    absorb_connections(&mut c, &key.conns)
}

/// Human-readable table index with vertex ids instead of bag positions.
/// `abov[i]` and `below[i]` belong to the `i`-th vertex of the sorted bag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DpIndex {
    pub f: Vec<(usize, usize)>,
    pub conns: Vec<Vec<usize>>,
    pub abov: Vec<u32>,
    pub below: Vec<u32>,
}

/// Finite entries of one decomposition node. Absent indices are infinite.
#[derive(Debug, Clone)]
pub struct DpTable {
    bag: Vec<usize>,
    forgotten: usize,
    entries: FxHashMap<Key, u64>,
}

impl DpTable {
    pub fn bag(&self) -> &[usize] {
        &self.bag
    }

    /// Number of vertices forgotten below this node.
    pub fn forgotten(&self) -> usize {
        self.forgotten
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn pos(&self, v: usize) -> Result<usize> {
        self.bag
            .binary_search(&v)
            .map_err(|_| Error::InvalidDecomposition(format!("vertex {v} is not in the bag")))
    }

    fn key_of(&self, idx: &DpIndex) -> Result<Key> {
        let k = self.bag.len();
        if idx.abov.len() != k || idx.below.len() != k {
            return Err(Error::InvalidDecomposition("index length differs from bag".into()));
        }
        let mut f = 0;
        for &(u, v) in &idx.f {
            f |= pair_bit(self.pos(u)?, self.pos(v)?);
        }
        let mut conns = Conns::new();
        for c in &idx.conns {
            let mut m = 0u16;
            for &v in c {
                m |= 1 << self.pos(v)?;
            }
            conns.push(m);
        }
        conns.sort_unstable();
        Ok(Key {
            f,
            conns,
            abov: idx.abov.iter().copied().collect(),
            below: idx.below.iter().copied().collect(),
        })
    }

    fn index_of(&self, key: &Key) -> DpIndex {
        let mut f: Vec<(usize, usize)> = pairs(key.f).map(|(i, j)| (self.bag[i], self.bag[j])).collect();
        f.sort_unstable();
        let mut conns: Vec<Vec<usize>> = key
            .conns
            .iter()
            .map(|&m| (0..self.bag.len()).filter(|&i| m >> i & 1 == 1).map(|i| self.bag[i]).collect())
            .collect();
        conns.sort();
        DpIndex {
            f,
            conns,
            abov: key.abov.to_vec(),
            below: key.below.to_vec(),
        }
    }

    /// Cost stored at `idx`, `None` for infinity.
    pub fn get(&self, idx: &DpIndex) -> Option<u64> {
        self.key_of(idx).ok().and_then(|k| self.entries.get(&k).copied())
    }

    /// All finite entries, sorted by index.
    pub fn entries(&self) -> Vec<(DpIndex, u64)> {
        let mut out: Vec<_> = self.entries.iter().map(|(k, &c)| (self.index_of(k), c)).collect();
        out.sort();
        out
    }

    /// Builds a table from explicit entries; each must satisfy the structural
    /// conditions for `n` vertices.
    pub fn from_entries(
        bag: Vec<usize>,
        forgotten: usize,
        n: usize,
        entries: Vec<(DpIndex, u64)>,
    ) -> Result<DpTable> {
        let mut bag = bag;
        bag.sort_unstable();
        if bag.len() > MAX_BAG {
            return Err(Error::TooLarge {
                what: "bag size",
                actual: bag.len(),
                limit: MAX_BAG,
            });
        }
        let mut t = DpTable {
            bag,
            forgotten,
            entries: FxHashMap::default(),
        };
        for (idx, c) in entries {
            let key = t.key_of(&idx)?;
            if !admissible(&key, n as u32) {
                return Err(Error::InvalidDecomposition(format!("inadmissible index {idx:?}")));
            }
            relax(&mut t.entries, key, c);
        }
        Ok(t)
    }

    /// Whether every stored index satisfies the structural conditions.
    pub fn all_admissible(&self, n: usize) -> bool {
        self.entries.keys().all(|k| admissible(k, n as u32))
    }

    pub fn max_cost(&self) -> Option<u64> {
        self.entries.values().copied().max()
    }
}

#[inline]
fn relax(t: &mut FxHashMap<Key, u64>, key: Key, cost: u64) {
    debug_assert!(key.abov.len() <= MAX_BAG);
    t.entry(key)
        .and_modify(|c| *c = (*c).min(cost))
        .or_insert(cost);
}

/// Entry survives if its cost plus a lower bound on the rest stays within
/// `ub`. Tree edges inside the bag have known contributions (their side
/// masses are fixed by the index). The forest built so far has one component
/// per class of `F` plus connections, which fixes how many undecided edges
/// remain; each of those costs at least `n - 1`.
fn within(key: &Key, cost: u64, ub: u64, n: usize, forgotten: usize) -> bool {
    if ub == u64::MAX {
        return true;
    }
    let k = key.abov.len();
    let nn = n as u64;
    let mut classes = Classes::with_forest(key.f);
    absorb_connections(&mut classes, &key.conns);
    let comps = (0..k).filter(|&v| classes.find(v) == v).count();
    let rest = (n - 1 + comps).saturating_sub(forgotten + k) as u64;
    let mut bound = cost.saturating_add(rest * (nn - 1));
    if bound > ub {
        return false;
    }
    for (i, j) in pairs(key.f) {
        let mut side = Classes::with_forest(key.f & !pair_bit(i, j));
        let r = side.find(i);
        let m: u64 = (0..k)
            .filter(|&v| side.find(v) == r)
            .map(|v| 1 + key.abov[v] as u64 + key.below[v] as u64)
            .sum();
        bound += m * (nn - m);
        if bound > ub {
            return false;
        }
    }
    true
}

/// Leaf node with bag `{v}`: the single entry with everything above `v`.
pub fn process_leaf(v: usize, n: usize) -> DpTable {
    let mut entries = FxHashMap::default();
    entries.insert(
        Key {
            f: 0,
            conns: Conns::new(),
            abov: SmallVec::from_slice(&[n as u32 - 1]),
            below: SmallVec::from_slice(&[0]),
        },
        0,
    );
    DpTable {
        bag: vec![v],
        forgotten: 0,
        entries,
    }
}

/// Introduce node adding `u`. The new vertex picks tree edges to bag
/// neighbors in distinct components; each chosen neighbor `v` hands the mass
/// on `u`'s side of `uv` from `abov(v)` over to the new edge.
pub fn process_introduce(g: &Graph, child: &DpTable, u: usize, ub: u64) -> DpTable {
    let n = g.n();
    let nn = n as u32;
    let p = child.bag.partition_point(|&x| x < u);
    let mut bag = child.bag.clone();
    bag.insert(p, u);
    let cand: Vec<usize> = (0..child.bag.len()).filter(|&i| g.has_edge(child.bag[i], u)).collect();
    let shift = |i: usize| if i >= p { i + 1 } else { i };
    let forgotten = child.forgotten;
    let mut out = FxHashMap::default();
    for (key, &cost) in &child.entries {
        let mut classes = Classes::with_forest(key.f);
        absorb_connections(&mut classes, &key.conns);
        let class: Vec<usize> = cand.iter().map(|&i| classes.find(i)).collect();
        let base_f = remap_pairs(key.f, |i| Some(shift(i)));
        let conns: Conns = key.conns.iter().map(|&m| insert_bit(m, p)).collect();
        let mut below = key.below.clone();
        below.insert(p, 0);

        // subsets of candidates hitting distinct classes
        let mut chosen: Vec<usize> = Vec::new();
        fn subsets(
            idx: usize,
            cand: &[usize],
            class: &[usize],
            chosen: &mut Vec<usize>,
            f: &mut dyn FnMut(&[usize]),
        ) {
            if idx == cand.len() {
                f(chosen);
                return;
            }
            subsets(idx + 1, cand, class, chosen, f);
            if chosen.iter().all(|&c| class[c] != class[idx]) {
                chosen.push(idx);
                subsets(idx + 1, cand, class, chosen, f);
                chosen.pop();
            }
        }
        subsets(0, &cand, &class, &mut chosen, &mut |sel: &[usize]| {
            let s: Vec<usize> = sel.iter().map(|&c| cand[c]).collect();
            let mut f = base_f;
            for &i in &s {
                f |= pair_bit(shift(i), p);
            }
            let mut abov = key.abov.clone();
            abov.insert(p, 0);
            if s.is_empty() {
                abov[p] = nn - 1;
                let key = Key {
                    f,
                    conns: conns.clone(),
                    abov,
                    below: below.clone(),
                };
                if within(&key, cost, ub, n, forgotten) {
                    relax(&mut out, key, cost);
                }
                return;
            }
            let k = s.len() as u64;
            let lo = 1 + (k - 1) * n as u64;
            let hi = k * n as u64;
            let caps: Vec<u64> = s.iter().map(|&i| key.abov[i] as u64).collect();
            let mut suffix_max = vec![0u64; s.len() + 1];
            for i in (0..s.len()).rev() {
                suffix_max[i] = suffix_max[i + 1] + caps[i];
            }
            let mut delta = vec![0u64; s.len()];
            fn spread(
                i: usize,
                sum: u64,
                lo: u64,
                hi: u64,
                caps: &[u64],
                suffix_max: &[u64],
                delta: &mut [u64],
                emit: &mut dyn FnMut(&[u64], u64),
            ) {
                if i == caps.len() {
                    if sum >= lo && sum <= hi {
                        emit(delta, sum);
                    }
                    return;
                }
                let left = (caps.len() - i - 1) as u64;
                for d in 1..=caps[i] {
                    let s2 = sum + d;
                    if s2 + left > hi {
                        break;
                    }
                    if s2 + suffix_max[i + 1] < lo {
                        continue;
                    }
                    delta[i] = d;
                    spread(i + 1, s2, lo, hi, caps, suffix_max, delta, emit);
                }
            }
            spread(0, 0, lo, hi, &caps, &suffix_max, &mut delta, &mut |delta, sum| {
                let mut a = abov.clone();
                for (j, &i) in s.iter().enumerate() {
                    a[shift(i)] -= delta[j] as u32;
                }
                a[p] = (sum - lo) as u32;
                let key = Key {
                    f,
                    conns: conns.clone(),
                    abov: a,
                    below: below.clone(),
                };
                if within(&key, cost, ub, n, forgotten) {
                    relax(&mut out, key, cost);
                }
            });
        });
    }
    DpTable {
        bag,
        forgotten: child.forgotten,
        entries: out,
    }
}

/// Forget node dropping `u`. Requires `abov(u) = 0`; every tree edge from
/// `u` into the bag becomes a forgotten edge and is paid for, and `u`'s bag
/// neighbors and connections merge into one connection.
pub fn process_forget(child: &DpTable, u: usize, n: usize, ub: u64) -> DpTable {
    let p = child.pos(u).expect("forgotten vertex is in the child bag");
    let mut bag = child.bag.clone();
    bag.remove(p);
    let forgotten = child.forgotten + 1;
    let nn = n as u64;
    let unshift = |i: usize| if i == p { None } else if i > p { Some(i - 1) } else { Some(i) };
    let mut out = FxHashMap::default();
    for (key, &cost) in &child.entries {
        if key.abov[p] != 0 {
            continue;
        }
        let mut xs: u16 = 0;
        let mut rest_f = key.f;
        for (i, j) in pairs(key.f) {
            if i == p || j == p {
                xs |= 1 << (i + j - p);
                rest_f &= !pair_bit(i, j);
            }
        }
        let mut merged = xs;
        let mut conns = Conns::new();
        for &m in &key.conns {
            if m >> p & 1 == 1 {
                merged |= m & !(1 << p);
            } else {
                conns.push(m);
            }
        }
        if merged == 0 {
            continue;
        }
        let mut below = key.below.clone();
        let mut cost = cost;
        if xs != 0 {
            let mut classes = Classes::with_forest(rest_f);
            let mut mass = [0u64; MAX_BAG];
            for v in 0..key.abov.len() {
                if v != p {
                    let r = classes.find(v);
                    mass[r] += 1 + key.abov[v] as u64 + key.below[v] as u64;
                }
            }
            let mut x = xs;
            while x != 0 {
                let v = x.trailing_zeros() as usize;
                x &= x - 1;
                let side = mass[classes.find(v)];
                cost += side * (nn - side);
                below[v] += (nn - side) as u32;
            }
        }
        if merged.count_ones() >= 2 {
            conns.push(merged);
        }
        let mut conns: Conns = conns.into_iter().map(|m| remove_bit(m, p)).collect();
        conns.sort_unstable();
        let mut abov = key.abov.clone();
        abov.remove(p);
        below.remove(p);
        let key = Key {
            f: remap_pairs(rest_f, unshift),
            conns,
            abov,
            below,
        };
        debug_assert!(admissible(&key, n as u32), "forget produced {key:?}");
        if within(&key, cost, ub, n, forgotten) {
            relax(&mut out, key, cost);
        }
    }
    DpTable {
        bag,
        forgotten,
        entries: out,
    }
}

/// Join node: the two sides agree on `F` and on `abov + below`; belows add
/// up, connections are combined and must stay acyclic.
pub fn process_join(left: &DpTable, right: &DpTable, n: usize, ub: u64) -> DpTable {
    assert_eq!(left.bag, right.bag, "join children need equal bags");
    let forgotten = left.forgotten + right.forgotten;
    let k = left.bag.len();
    let mut groups: FxHashMap<(u128, Vals), Vec<(&Key, u64)>> = FxHashMap::default();
    for (key, &c) in &right.entries {
        let sums: Vals = (0..k).map(|i| key.abov[i] + key.below[i]).collect();
        groups.entry((key.f, sums)).or_default().push((key, c));
    }
    let mut out = FxHashMap::default();
    for (lk, &lc) in &left.entries {
        let sums: Vals = (0..k).map(|i| lk.abov[i] + lk.below[i]).collect();
        let Some(partners) = groups.get(&(lk.f, sums)) else {
            continue;
        };
        for &(rk, rc) in partners {
            let cost = lc + rc;
            if (0..k).any(|i| lk.abov[i] < rk.below[i]) {
                continue;
            }
            let mut conns = lk.conns.clone();
            conns.extend_from_slice(&rk.conns);
            let mut classes = Classes::with_forest(lk.f);
            if !absorb_connections(&mut classes, &conns) {
                continue;
            }
            conns.sort_unstable();
            let abov: Vals = (0..k).map(|i| lk.abov[i] - rk.below[i]).collect();
            let below: Vals = (0..k).map(|i| lk.below[i] + rk.below[i]).collect();
            let key = Key {
                f: lk.f,
                conns,
                abov,
                below,
            };
            if within(&key, cost, ub, n, forgotten) {
                relax(&mut out, key, cost);
            }
        }
    }
    DpTable {
        bag: left.bag.clone(),
        forgotten,
        entries: out,
    }
}

struct Runner<'a> {
    g: &'a Graph,
    nice: &'a NiceTreeDecomposition,
    ub: u64,
    inspect: Option<&'a (dyn Fn(&DpTable) + Sync)>,
}

impl Runner<'_> {
    fn eval(&self, id: usize) -> DpTable {
        let n = self.g.n();
        let mut chain = Vec::new();
        let mut cur = id;
        loop {
            match self.nice.nodes[cur].kind {
                NodeKind::Introduce(_) | NodeKind::Forget(_) => {
                    chain.push(cur);
                    cur = self.nice.nodes[cur].children[0];
                }
                _ => break,
            }
        }
        let node = &self.nice.nodes[cur];
        let mut table = match node.kind {
            NodeKind::Leaf => process_leaf(node.bag[0], n),
            NodeKind::Join => {
                let (l, r) = par::join(|| self.eval(node.children[0]), || self.eval(node.children[1]));
                process_join(&l, &r, n, self.ub)
            }
            _ => unreachable!("chains stop at leaves and joins"),
        };
        self.look(&table);
        for &c in chain.iter().rev() {
            table = match self.nice.nodes[c].kind {
                NodeKind::Introduce(v) => process_introduce(self.g, &table, v, self.ub),
                NodeKind::Forget(v) => process_forget(&table, v, n, self.ub),
                _ => unreachable!(),
            };
            self.look(&table);
        }
        table
    }

    fn look(&self, t: &DpTable) {
        if let Some(f) = self.inspect {
            f(t);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreewidthSolution {
    pub wiener: u64,
    pub width: usize,
    pub decision: Option<bool>,
}

fn prepare(g: &Graph, td: Option<&TreeDecomposition>) -> Result<NiceTreeDecomposition> {
    let owned;
    let td = match td {
        Some(td) => {
            td.validate(g)?;
            td
        }
        None => {
            owned = heuristic_tree_decomposition(g);
            &owned
        }
    };
    if td.width() + 1 > MAX_BAG {
        return Err(Error::TooLarge {
            what: "bag size",
            actual: td.width() + 1,
            limit: MAX_BAG,
        });
    }
    to_nice(td)
}

/// Optimum Wiener index among spanning trees with value at most `ub`, or
/// `None` if there is none. `inspect` sees every table as it is produced.
pub fn treewidth_optimum(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    ub: Option<u64>,
    inspect: Option<&(dyn Fn(&DpTable) + Sync)>,
) -> Result<Option<u64>> {
    g.require_connected()?;
    if g.n() == 1 {
        if let Some(td) = td {
            td.validate(g)?;
        }
        return Ok(Some(0));
    }
    let nice = prepare(g, td)?;
    let ub = match ub {
        Some(b) => b,
        None => best_bfs_tree(g)?.1,
    };
    let runner = Runner {
        g,
        nice: &nice,
        ub,
        inspect,
    };
    let root = runner.eval(nice.root);
    let n = g.n() as u32;
    let key = Key {
        f: 0,
        conns: Conns::new(),
        abov: SmallVec::from_slice(&[0]),
        below: SmallVec::from_slice(&[n - 1]),
    };
    Ok(root.entries.get(&key).copied())
}

/// Exact MAD tree value by dynamic programming over `td` (or a min-fill
/// decomposition when none is given).
pub fn solve_treewidth(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    budget: Option<u64>,
) -> Result<TreewidthSolution> {
    g.require_connected()?;
    let owned;
    let td = match td {
        Some(td) => td,
        None => {
            owned = heuristic_tree_decomposition(g);
            &owned
        }
    };
    let width = td.width();
    let w = treewidth_optimum(g, Some(td), None, None)?
        .expect("the breadth-first bound is attained by a spanning tree");
    Ok(TreewidthSolution {
        wiener: w,
        width,
        decision: budget.map(|b| w <= b),
    })
}
