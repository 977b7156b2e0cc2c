use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use madst_core::gen::{gen_cograph, gen_partial_ktree, gen_random_connected};
use madst_core::integrity::solve_vertex_integrity;
use madst_core::modular::solve_modular;
use madst_core::oracle::mad_tree_bruteforce;
use madst_core::treewidth::solve_treewidth;
use madst_core::Graph;
use rayon::ThreadPoolBuilder;

type Solver = fn(&Graph) -> u64;

fn cases() -> Vec<(&'static str, Graph, Solver)> {
    vec![
        ("oracle", gen_random_connected(9, 0.5, 1).unwrap(), |g| mad_tree_bruteforce(g).unwrap().1),
        ("modular", gen_cograph(60, 2).unwrap().graph, |g| solve_modular(g, None).unwrap().wiener),
        ("treewidth", gen_partial_ktree(20, 2, 4, 3).unwrap(), |g| solve_treewidth(g, None, None).unwrap().wiener),
        ("integrity", gen_random_connected(8, 0.6, 4).unwrap(), |g| solve_vertex_integrity(g, None).unwrap().wiener),
    ]
}

// Build with `--no-default-features` to time the sequential fallback; with the
// default `parallel` feature this compares one worker against the full pool.
fn bench(c: &mut Criterion) {
    let single = ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let mut group = c.benchmark_group("solvers");
    group.sample_size(10);
    for (name, g, solve) in cases() {
        group.bench_with_input(BenchmarkId::new("one_thread", name), &g, |b, g| {
            b.iter(|| single.install(|| solve(g)))
        });
        group.bench_with_input(BenchmarkId::new("global_pool", name), &g, |b, g| b.iter(|| solve(g)));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
