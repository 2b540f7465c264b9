//! Compares the data-parallel candidate sweep against the sequential
//! baseline on a cubic field whose top-part resultant splits into four
//! linear factors, so the candidate count grows cubically with the degree
//! and every candidate runs its own chain of exact linear solves.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pi_search::{search_planar, search_planar_sequential, SearchConfig};
use system_model::parse_system;

fn bench_search(c: &mut Criterion) {
    let sys = parse_system("vars x y\nx' = x*y^2 + 1\ny' = x^2*y + 1").unwrap();
    let mut group = c.benchmark_group("planar_search");
    group.sample_size(10);
    for degree in [3u32, 4, 5] {
        let cfg = SearchConfig::new(degree);
        group.bench_with_input(BenchmarkId::new("parallel", degree), &degree, |b, _| {
            b.iter(|| search_planar(&sys, &cfg).unwrap());
        });
        group.bench_with_input(BenchmarkId::new("sequential", degree), &degree, |b, _| {
            b.iter(|| search_planar_sequential(&sys, &cfg).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_search);
criterion_main!(benches);
