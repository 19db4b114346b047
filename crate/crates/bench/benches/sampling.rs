use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use plancherel::plancherel::{growth_sample, rsk_sample};
use plancherel::SeededStream;
use std::hint::black_box;

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    for n in [64u32, 256, 1024] {
        group.bench_with_input(BenchmarkId::new("rsk", n), &n, |b, &n| {
            let mut rng = SeededStream::new(1).rng();
            b.iter(|| rsk_sample(black_box(n), &mut rng))
        });
        group.bench_with_input(BenchmarkId::new("growth", n), &n, |b, &n| {
            let mut rng = SeededStream::new(1).rng();
            b.iter(|| growth_sample(black_box(n), &mut rng))
        });
    }
    group.finish();
}

criterion_group!(benches, sampling);
criterion_main!(benches);
