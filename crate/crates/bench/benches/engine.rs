//! Hot-path benchmarks: table construction, both exact routes, log-domain
//! accumulation, enumeration, and the high-precision residual.

use criterion::{criterion_group, criterion_main, Criterion};
use krank_bench::table;
use krank_core::{
    enumerate_statistic, n_k_exact, n_k_oracle_series, signed_log_sum, KRankQuery, Residuals,
    SignedLogReal, Statistic,
};

fn bench_table_build(c: &mut Criterion) {
    c.bench_function("table_build_10k", |b| b.iter(|| table(10_000)));
}

fn bench_exact_routes(c: &mut Criterion) {
    let shared = table(100_000);
    let crank = KRankQuery::new(1, 316, 100_000).unwrap();
    let rank = KRankQuery::new(2, 316, 100_000).unwrap();
    c.bench_function("n_k_exact_crank_1e5", |b| {
        b.iter(|| n_k_exact(&shared, &crank).unwrap())
    });
    c.bench_function("n_k_exact_rank_1e5", |b| {
        b.iter(|| n_k_exact(&shared, &rank).unwrap())
    });
    c.bench_function("oracle_series_200", |b| {
        b.iter(|| n_k_oracle_series(2, 5, 200).unwrap())
    });
}

fn bench_signed_log_sum(c: &mut Criterion) {
    let terms: Vec<SignedLogReal> = (0..1_000)
        .map(|i| {
            SignedLogReal::from_sign_log(if i % 2 == 0 { 1 } else { -1 }, (i as f64).sqrt())
        })
        .collect();
    c.bench_function("signed_log_sum_1000", |b| b.iter(|| signed_log_sum(&terms)));
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("enumerate_rank_30", |b| {
        b.iter(|| enumerate_statistic(30, Statistic::Rank).unwrap())
    });
}

fn bench_residual(c: &mut Criterion) {
    let shared = table(10_000);
    let mut residuals = Residuals::new();
    c.bench_function("residual_constant_1e4", |b| {
        b.iter(|| residuals.residual_constant(10_000, &shared.values()[10_000]))
    });
}

criterion_group!(
    benches,
    bench_table_build,
    bench_exact_routes,
    bench_signed_log_sum,
    bench_enumerate,
    bench_residual
);
criterion_main!(benches);
