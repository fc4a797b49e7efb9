use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use shortpsi::explicit::{sum_s_rho, truncated_psi1};
use shortpsi::query::sqrt_log;
use shortpsi::{max_gap_scan, IntervalQuery, LambdaSource, SegmentedSieve};
use shortpsi_bench::synthetic_table;

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve");
    for limit in [1_000_000u64, 10_000_000] {
        let s = SegmentedSieve::new(limit);
        g.throughput(Throughput::Elements(limit));
        g.bench_with_input(BenchmarkId::new("psi", limit), &limit, |b, &n| {
            b.iter(|| s.psi(black_box(n as f64 + 0.5)).unwrap())
        });
    }
    let s = SegmentedSieve::new(2_100_000);
    let q = IntervalQuery::theorem(1e6 + 0.5, 1e6).unwrap();
    g.bench_function("weighted_sum_1e6", |b| b.iter(|| s.weighted_lambda_sum(black_box(&q)).unwrap()));
    g.finish();
}

fn zero_sums(c: &mut Criterion) {
    let table = synthetic_table(100_000);
    let mut g = c.benchmark_group("zero_sums");
    g.throughput(Throughput::Elements(table.count() as u64));
    let x = 1e8 + 0.5;
    let q = IntervalQuery::unit(x, 1e6, 0.1 * sqrt_log(x)).unwrap();
    g.bench_function("s_rho_100k", |b| b.iter(|| sum_s_rho(black_box(table.ordinates()), &q)));
    g.bench_function("truncated_psi1_100k", |b| {
        b.iter(|| truncated_psi1(black_box(1e6 + 0.5), table.gamma_max(), &table).unwrap())
    });
    g.finish();
}

fn gaps(c: &mut Criterion) {
    c.bench_function("gap_scan_1e6", |b| b.iter(|| max_gap_scan(black_box(1_000_000)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = sieve, zero_sums, gaps
}
criterion_main!(benches);
