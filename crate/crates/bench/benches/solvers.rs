use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mlcover::lp::{default_relaxation, expand_cuts, solve, solve_cutting_plane};
use mlcover::oracle::exact;
use mlcover::{run, Algorithm, InstanceKind};
use mlcover_bench::fixture;

fn union(c: &mut Criterion) {
    let mut group = c.benchmark_group("union");
    for n in [6, 8] {
        let inst = fixture(InstanceKind::UnionKmst, n, 2, 4, 1);
        for algo in [Algorithm::Greedy, Algorithm::Lp, Algorithm::Exact] {
            group.bench_with_input(BenchmarkId::new(algo.as_str(), n), &inst, |b, i| b.iter(|| run(algo, i).unwrap()));
        }
    }
    let cover = fixture(InstanceKind::CoverUnion, 8, 2, 5, 2);
    group.bench_function("kmfl-lp", |b| b.iter(|| run(Algorithm::Lp, &cover).unwrap()));
    group.finish();
}

fn intersection(c: &mut Criterion) {
    let mut group = c.benchmark_group("intersection");
    let two = fixture(InstanceKind::CoverIntersection, 8, 2, 4, 3);
    let three = fixture(InstanceKind::CoverIntersection, 8, 3, 4, 3);
    group.bench_function("sci", |b| b.iter(|| run(Algorithm::Sci, &two).unwrap()));
    group.bench_function("fli-h2", |b| b.iter(|| run(Algorithm::Fli, &two).unwrap()));
    group.bench_function("fli-h3", |b| b.iter(|| run(Algorithm::Fli, &three).unwrap()));
    let graph = fixture(InstanceKind::IntersectionKmst, 8, 2, 4, 4);
    group.bench_function("sum-metric", |b| b.iter(|| run(Algorithm::SumMetric, &graph).unwrap()));
    group.bench_function("oracle", |b| b.iter(|| exact(&graph).unwrap()));
    group.finish();
}

fn relaxation(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp");
    let model = default_relaxation(&fixture(InstanceKind::UnionKmst, 6, 1, 3, 5)).unwrap();
    let explicit = expand_cuts(&model);
    group.bench_function("cutting-plane", |b| b.iter(|| solve_cutting_plane(&model, None).unwrap()));
    group.bench_function("explicit", |b| b.iter(|| solve(&explicit).unwrap()));
    group.finish();
}

criterion_group!(benches, union, intersection, relaxation);
criterion_main!(benches);
