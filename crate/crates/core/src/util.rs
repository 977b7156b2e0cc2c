/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already in the same set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Calls `f` on every subset of `items` with exactly `k` elements, in
/// lexicographic order of index tuples. Stops early when `f` returns false.
pub fn for_each_k_subset<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T]) -> bool) {
    fn rec<T: Copy>(
        items: &[T],
        k: usize,
        start: usize,
        cur: &mut Vec<T>,
        f: &mut dyn FnMut(&[T]) -> bool,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        let need = k - cur.len();
        for i in start..=items.len().saturating_sub(need) {
            if items.len() < need {
                break;
            }
            cur.push(items[i]);
            let go_on = rec(items, k, i + 1, cur, f);
            cur.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut cur = Vec::with_capacity(k);
    rec(items, k, 0, &mut cur, &mut f);
}

/// Iterates over all permutations of `v` (Heap's algorithm), calling `f` on each.
pub fn for_each_permutation<T: Clone>(v: &mut [T], f: &mut impl FnMut(&[T])) {
    let n = v.len();
    let mut c = vec![0usize; n];
    f(v);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                v.swap(0, i);
            } else {
                v.swap(c[i], i);
            }
            f(v);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_count() {
        let items: Vec<usize> = (0..6).collect();
        let mut seen = Vec::new();
        for_each_k_subset(&items, 3, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen.len(), 20);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[19], vec![3, 4, 5]);
        let mut empty = 0;
        for_each_k_subset(&items, 0, |_| {
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn permutations_are_distinct() {
        let mut v = vec![0, 1, 2, 3];
        let mut all = std::collections::BTreeSet::new();
        for_each_permutation(&mut v, &mut |p: &[i32]| {
            all.insert(p.to_vec());
        });
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn union_find_tracks_sets() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 4));
        assert!(!uf.union(1, 0));
        assert!(uf.same(0, 1));
        assert!(!uf.same(1, 3));
    }
}
