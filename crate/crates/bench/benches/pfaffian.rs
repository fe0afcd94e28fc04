use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use hermpf::class_group::chi_hermitian;
use hermpf::demos::hyperbolic_plane;
use hermpf::forms::{pfaffian, pfaffian_matching};
use hermpf::group::FiniteGroup;
use hermpf_bench::alternating;

fn pfaffians(c: &mut Criterion) {
    let mut group = c.benchmark_group("pfaffian");
    for m in [2, 3, 4] {
        let a = alternating(m);
        group.bench_with_input(BenchmarkId::new("elimination", 2 * m), &a, |b, a| b.iter(|| pfaffian(black_box(a)).unwrap()));
        group.bench_with_input(BenchmarkId::new("matching", 2 * m), &a, |b, a| b.iter(|| pfaffian_matching(black_box(a)).unwrap()));
    }
    for m in [8, 16] {
        let a = alternating(m);
        group.bench_with_input(BenchmarkId::new("elimination", 2 * m), &a, |b, a| b.iter(|| pfaffian(black_box(a)).unwrap()));
    }
    group.finish();
}

fn hermitian_class(c: &mut Criterion) {
    let mut group = c.benchmark_group("chi_hermitian");
    group.sample_size(10);
    for name in ["C2", "S3", "Q8"] {
        let g = FiniteGroup::catalog(name).unwrap();
        let (p, s) = hyperbolic_plane(&g);
        group.bench_function(BenchmarkId::new("hyperbolic_plane", name), |b| b.iter(|| chi_hermitian(black_box(&p), black_box(&s)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, pfaffians, hermitian_class);
criterion_main!(benches);
