//! Sequential fallback against the rayon path on the two heavy workloads:
//! the characteristic-5 scan and the brute-force character identity suite.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pnsieve::cache::FactorCache;
use pnsieve::charsum::identity_suite;
use pnsieve::ffield::build_field;
use pnsieve::intfact::Budget;
use pnsieve::par::Exec;
use pnsieve::search::scan;

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::auto())]
}

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_char5_k3_m24");
    group.sample_size(10);
    // factorizations are shared so only the criteria are timed
    let cache = FactorCache::new(Budget::default());
    scan(5, 3, (5, 24), 4, Exec::auto(), &cache).unwrap();
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan(5, 3, (5, 24), 4, exec, &cache).unwrap())
        });
    }
    group.finish();
}

fn bench_identities(c: &mut Criterion) {
    let mut group = c.benchmark_group("identities_f5_3");
    group.sample_size(10);
    let ctx = build_field(5, 1, 3).unwrap();
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| identity_suite(&ctx, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_scan, bench_identities);
criterion_main!(benches);
