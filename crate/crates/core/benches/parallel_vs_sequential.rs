//! Pool of one thread against the full pool. Built with
//! `--no-default-features` the "parallel" rows fall back to plain iterators.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cubekit::cubes::enumerate_cubes;
use cubekit::fixtures::builtin;
use cubekit::homology::{boundary_snfs, build_chain_complex};
use cubekit::rank_graph::{adjacency_matrices, check_uce, UceMode};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

fn modes() -> Vec<(&'static str, usize)> {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    vec![("sequential", 1), ("parallel", all)]
}

fn bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    for name in ["gamma357", "f3-3"] {
        let p = builtin(name).unwrap();
        let cubes = enumerate_cubes(&p, p.k()).unwrap();
        let m = adjacency_matrices(&cubes, &p.sizes()).unwrap();
        let cx = build_chain_complex(p.k(), &m).unwrap();
        for (mode, threads) in modes() {
            g.bench_with_input(BenchmarkId::new(format!("complex/{mode}"), name), &m, |b, m| {
                b.iter(|| in_pool(threads, || build_chain_complex(m.k(), m).unwrap()))
            });
            g.bench_with_input(BenchmarkId::new(format!("snf/{mode}"), name), &cx, |b, cx| {
                b.iter(|| in_pool(threads, || boundary_snfs(cx, false)))
            });
            g.bench_with_input(BenchmarkId::new(format!("uce/{mode}"), name), &m, |b, m| {
                b.iter(|| in_pool(threads, || check_uce(m, UceMode::Exhaustive)))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
