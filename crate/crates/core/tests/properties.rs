use madst_core::gen::gen_random_connected;
use madst_core::oracle::{count_spanning_trees, enumerate_spanning_trees, mad_tree_bruteforce};
use madst_core::{
    bfs_distances, edge_contribution, is_induced_path, median_vertices, shortest_cycle, wiener_graph, wiener_tree,
    Graph, SpanningTree,
};
use proptest::prelude::*;

fn connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0.0..1.0f64, any::<u64>()).prop_map(|(n, p, seed)| gen_random_connected(n, p, seed).unwrap())
}

/// Kruskal on random weights.
fn random_spanning_tree(g: &Graph, weights: &[u32]) -> SpanningTree {
    let mut edges = g.edge_list();
    edges.sort_by_key(|&(u, v)| (weights[(u * 31 + v) % weights.len()], u, v));
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut chosen = Vec::new();
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            chosen.push((u, v));
        }
    }
    SpanningTree::new(g, chosen).unwrap()
}

fn tree_path(t: &SpanningTree, from: usize, to: usize) -> Vec<usize> {
    let adj = t.adjacency();
    let mut parent = vec![usize::MAX; t.n()];
    parent[from] = from;
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_distances_dominate(g in connected(10), w in prop::collection::vec(any::<u32>(), 64)) {
        let t = random_spanning_tree(&g, &w);
        prop_assert!(wiener_tree(&t) >= wiener_graph(&g).unwrap());
    }

    #[test]
    fn edge_contributions_sum_to_wiener(g in connected(10), w in prop::collection::vec(any::<u32>(), 64)) {
        let t = random_spanning_tree(&g, &w);
        let by_edges: u64 = t.edges().iter().map(|&e| edge_contribution(&t, e).unwrap()).sum();
        let by_bfs: u64 = (0..t.n()).map(|v| bfs_distances(&t.as_graph(), v).total()).sum::<u64>() / 2;
        prop_assert_eq!(by_edges, wiener_tree(&t));
        prop_assert_eq!(by_bfs, wiener_tree(&t));
    }

    #[test]
    fn cycle_exists_unless_tree(g in connected(10)) {
        prop_assert_eq!(shortest_cycle(&g).is_none(), g.m() + 1 == g.n());
    }

    #[test]
    fn medians_follow_relabeling(g in connected(10), perm_seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let h = g.relabel(&perm);
        let mut mapped: Vec<usize> = median_vertices(&g).unwrap().iter().map(|&v| perm[v]).collect();
        mapped.sort_unstable();
        prop_assert_eq!(median_vertices(&h).unwrap(), mapped);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_kirchhoff(g in connected(8)) {
        let trees = enumerate_spanning_trees(&g).unwrap();
        prop_assert_eq!(trees.len() as u64, count_spanning_trees(&g).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn optimum_ignores_labels(g in connected(7), perm_seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        prop_assert_eq!(mad_tree_bruteforce(&g).unwrap().1, mad_tree_bruteforce(&g.relabel(&perm)).unwrap().1);
    }

    #[test]
    fn paths_from_tree_medians_are_induced(g in connected(7)) {
        let trees = enumerate_spanning_trees(&g).unwrap();
        let best = trees.iter().map(SpanningTree::wiener).min().unwrap();
        for t in trees.iter().filter(|t| t.wiener() == best) {
            for c in median_vertices(&t.as_graph()).unwrap() {
                for v in 0..g.n() {
                    prop_assert!(is_induced_path(&g, &tree_path(t, c, v)).unwrap());
                }
            }
        }
    }
}
