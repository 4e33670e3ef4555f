use ccindex_bench::{central, newtonian, random_point};
use ccindex_core::{census, find_cc, fixed_point_index, map_f, SolverConfig};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_map_f(c: &mut Criterion) {
    let mut group = c.benchmark_group("map_f");
    for n in [3, 6, 12, 24] {
        let pot = newtonian(n);
        let q = random_point(&pot, 3, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| b.iter(|| map_f(&pot, black_box(q))));
    }
    group.finish();
}

fn bench_find_cc(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_cc");
    let cfg = SolverConfig::default();
    for (n, d) in [(3, 2), (5, 2), (5, 3), (8, 3)] {
        let pot = newtonian(n);
        let seed = random_point(&pot, d, 11);
        group.bench_function(BenchmarkId::new(format!("d{d}"), n), |b| {
            b.iter(|| find_cc(&pot, black_box(seed.configuration()), &cfg))
        });
    }
    group.finish();
}

fn bench_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for n in [3, 4, 5] {
        let pot = newtonian(n);
        let cfg = SolverConfig { n_starts: 32, rng_seed: 1, ..Default::default() };
        group.bench_function(BenchmarkId::from_parameter(n), |b| b.iter(|| census(&pot, 2, black_box(&cfg))));
    }
    group.finish();
}

fn bench_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("fixed_point_index");
    for (n, d) in [(3, 2), (6, 2), (5, 3)] {
        let pot = newtonian(n);
        let rec = central(&pot, d, 3);
        group.bench_function(BenchmarkId::new(format!("d{d}"), n), |b| {
            b.iter(|| fixed_point_index(&pot, black_box(&rec.q)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_map_f, bench_find_cc, bench_census, bench_index);
criterion_main!(benches);
