use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use ennbo_bench::{random_dataset, random_rows};
use ennbo_core::{knn, query, Design, EnnSurrogate};

const DIM: usize = 30;

fn single_query(c: &mut Criterion) {
    let mut group = c.benchmark_group("enn_query");
    let q = Design::new(random_rows(1, DIM, 7)).unwrap();
    for n in [100, 1_000, 10_000] {
        let ds = random_dataset(n, DIM, 1);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("knn", n), &ds, |b, ds| {
            b.iter(|| knn(black_box(ds), black_box(&q), 10).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("query", n), &ds, |b, ds| {
            b.iter(|| query(black_box(ds), black_box(&q), 10).unwrap())
        });
    }
    group.finish();
}

fn candidate_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("enn_batch_5000");
    group.sample_size(10);
    let pool = random_rows(5_000, DIM, 9);
    for n in [100, 1_000] {
        let ds = random_dataset(n, DIM, 2);
        let sur = EnnSurrogate::new(&ds, 10).unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| sur.estimate_rows(black_box(&pool)).unwrap())
        });
    }
    group.finish();
}

fn neighbor_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("enn_k");
    let ds = random_dataset(2_000, DIM, 3);
    let q = Design::new(random_rows(1, DIM, 4)).unwrap();
    for k in [1, 10, 100] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| query(&ds, black_box(&q), k).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, single_query, candidate_batch, neighbor_count);
criterion_main!(benches);
