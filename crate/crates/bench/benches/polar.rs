use blockzxz::polar::{polar_heron, polar_spectral};
use blockzxz::PolarOptions;
use blockzxz_bench::half_block;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn polar(c: &mut Criterion) {
    let opts = PolarOptions::default();
    let mut g = c.benchmark_group("polar");
    for n in [2usize, 8, 32] {
        let m = half_block(n, 11);
        g.bench_with_input(BenchmarkId::new("heron", n), &m, |b, m| {
            b.iter(|| polar_heron(black_box(m), &opts).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("spectral", n), &m, |b, m| {
            b.iter(|| polar_spectral(black_box(m), &opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, polar);
criterion_main!(benches);
