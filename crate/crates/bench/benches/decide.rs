use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use threeway::{build, check_m, check_p, decide_tree_map, decide_ultrametric};
use threeway_bench::{leaves, rooted_map, triplets, unrooted_map};

const SIZES: [usize; 4] = [5, 8, 12, 16];

fn five_point(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_p");
    for n in SIZES {
        let d = rooted_map(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| b.iter(|| check_p(black_box(d))));
    }
    g.finish();
}

fn tree_map_conditions(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_m");
    for n in SIZES {
        let d = unrooted_map(n, 2);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| b.iter(|| check_m(black_box(d))));
    }
    g.finish();
}

fn reconstruction(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide_ultrametric");
    for n in SIZES {
        let d = rooted_map(n, 3);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| {
            b.iter(|| decide_ultrametric(black_box(d)))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("decide_tree_map");
    for n in SIZES {
        let d = unrooted_map(n, 4);
        g.bench_with_input(BenchmarkId::from_parameter(n), &d, |b, d| b.iter(|| decide_tree_map(black_box(d))));
    }
    g.finish();
}

fn supertree(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for n in [8, 16, 32, 64] {
        let ts = triplets(n, 5);
        let ground = leaves(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ts, |b, ts| {
            b.iter(|| build(black_box(ts), &ground))
        });
    }
    g.finish();
}

criterion_group!(benches, five_point, tree_map_conditions, reconstruction, supertree);
criterion_main!(benches);
