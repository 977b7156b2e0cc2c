use crate::error::{Error, Result};
use crate::integrity::extend::ExtensionConstants;

/// Default cap on search nodes for one count assignment.
pub const DEFAULT_STATE_LIMIT: u64 = 5_000_000;

/// Cost added by `x` more components of class `a`, given the counts already
/// fixed for earlier classes.
fn step_cost(c: &ExtensionConstants, x: &[u64], a: usize, xa: u64) -> u64 {
    let mut cost = xa * (c.d_self[a] + c.d_tree[a]) + xa * xa.saturating_sub(1) / 2 * c.d_pair[a][a];
    for (b, &xb) in x.iter().enumerate().take(a) {
        cost += xa * xb * c.d_pair[a][b];
    }
    cost
}

/// Total Wiener contribution of the components outside the candidate tree
/// under a count assignment.
pub fn assignment_cost(c: &ExtensionConstants, x: &[u64]) -> u64 {
    (0..x.len()).map(|a| step_cost(c, x, a, x[a])).sum()
}

struct Search<'a> {
    c: &'a ExtensionConstants,
    owner: Vec<usize>,
    last_of_type: Vec<bool>,
    x: Vec<u64>,
    left: Vec<u64>,
    best: Option<(u64, Vec<u64>)>,
    states: u64,
    limit: u64,
}

impl Search<'_> {
    fn run(&mut self, a: usize, cost: u64) -> Result<()> {
        self.states += 1;
        if self.states > self.limit {
            return Err(Error::TooLarge {
                what: "extension count states",
                actual: self.states as usize,
                limit: self.limit as usize,
            });
        }
        if self.best.as_ref().is_some_and(|b| cost >= b.0) {
            return Ok(());
        }
        if a == self.x.len() {
            self.best = Some((cost, self.x.clone()));
            return Ok(());
        }
        let t = self.owner[a];
        let range = if self.last_of_type[a] {
            self.left[t]..=self.left[t]
        } else {
            0..=self.left[t]
        };
        for xa in range {
            let add = step_cost(self.c, &self.x, a, xa);
            self.x[a] = xa;
            self.left[t] -= xa;
            let r = self.run(a + 1, cost + add);
            self.left[t] += xa;
            self.x[a] = 0;
            r?;
        }
        Ok(())
    }
}

/// Exact minimizer over all ways to split each type's components among its
/// extensions. Among optimal assignments the lexicographically smallest one
/// (over classes in order) is returned, grouped per type.
pub fn solve_extension_counts(c: &ExtensionConstants, limit: u64) -> Result<(Vec<Vec<u64>>, u64)> {
    let types = c.counts.len();
    for t in 0..types {
        if c.counts[t] > 0 && c.offsets[t] == c.offsets[t + 1] {
            return Err(Error::InfeasibleCounts(format!(
                "type {t} has {} components but no way to attach them",
                c.counts[t]
            )));
        }
    }
    let mut owner = Vec::new();
    let mut last_of_type = Vec::new();
    for t in 0..types {
        for a in c.offsets[t]..c.offsets[t + 1] {
            owner.push(t);
            last_of_type.push(a + 1 == c.offsets[t + 1]);
        }
    }
    let mut search = Search {
        c,
        owner,
        last_of_type,
        x: vec![0; c.classes()],
        left: c.counts.clone(),
        best: None,
        states: 0,
        limit,
    };
    search.run(0, 0)?;
    let (cost, x) = search.best.expect("some assignment exists");
    let grouped = (0..types).map(|t| x[c.offsets[t]..c.offsets[t + 1]].to_vec()).collect();
    Ok((grouped, cost))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants(counts: Vec<u64>, offsets: Vec<usize>, d_self: Vec<u64>, d_tree: Vec<u64>, d_pair: Vec<Vec<u64>>) -> ExtensionConstants {
        ExtensionConstants {
            counts,
            offsets,
            d_self,
            d_tree,
            d_pair,
        }
    }

    #[test]
    fn single_extension_is_forced() {
        let c = constants(vec![3], vec![0, 1], vec![0], vec![1], vec![vec![2]]);
        let (x, cost) = solve_extension_counts(&c, 100).unwrap();
        assert_eq!(x, vec![vec![3]]);
        // three leaves on one center: 3 to the center, 3 pairs at distance 2
        assert_eq!(cost, 9);
    }

    #[test]
    fn symmetric_split_takes_the_smallest_assignment() {
        let c = constants(vec![2], vec![0, 2], vec![0, 0], vec![1, 1], vec![vec![2, 2], vec![2, 2]]);
        let (x, cost) = solve_extension_counts(&c, 100).unwrap();
        assert_eq!(x, vec![vec![0, 2]]);
        assert_eq!(cost, 4);
    }

    #[test]
    fn nothing_left_costs_nothing() {
        let c = constants(vec![0, 0], vec![0, 1, 2], vec![5, 5], vec![5, 5], vec![vec![1, 1], vec![1, 1]]);
        let (x, cost) = solve_extension_counts(&c, 100).unwrap();
        assert_eq!((x, cost), (vec![vec![0], vec![0]], 0));
    }

    #[test]
    fn exhaustive_agrees_with_direct_enumeration() {
        // two types, two extensions each, arbitrary constants
        let d_pair = vec![vec![4, 3, 5, 2], vec![3, 1, 6, 2], vec![5, 6, 2, 3], vec![2, 2, 3, 7]];
        let c = constants(vec![3, 2], vec![0, 2, 4], vec![1, 4, 0, 2], vec![6, 2, 5, 3], d_pair);
        let (x, cost) = solve_extension_counts(&c, 1000).unwrap();
        let mut best = u64::MAX;
        for a in 0..=3 {
            for b in 0..=2 {
                best = best.min(assignment_cost(&c, &[a, 3 - a, b, 2 - b]));
            }
        }
        assert_eq!(cost, best);
        assert_eq!(assignment_cost(&c, &[x[0][0], x[0][1], x[1][0], x[1][1]]), best);
    }

    #[test]
    fn guards() {
        let c = constants(vec![1], vec![0, 0], vec![], vec![], vec![]);
        assert!(matches!(solve_extension_counts(&c, 10), Err(Error::InfeasibleCounts(_))));
        let c = constants(vec![30], vec![0, 3], vec![0; 3], vec![0; 3], vec![vec![0; 3]; 3]);
        // zero costs prune everything after the first assignment
        assert!(solve_extension_counts(&c, 1000).is_ok());
        let c = constants(vec![30], vec![0, 3], vec![1, 1, 1], vec![1; 3], vec![vec![1; 3]; 3]);
        assert!(matches!(solve_extension_counts(&c, 5), Err(Error::TooLarge { .. })));
    }
}
