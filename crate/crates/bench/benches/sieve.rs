use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use siftlab_bench::rough_system;
use siftlab_core::envelope::{FourierMajorant, MajorantParams, Variant};
use siftlab_core::sieve::{sift, Window};

fn bench_sift(c: &mut Criterion) {
    let mut g = c.benchmark_group("sift");
    for k in [12u32, 16, 20] {
        let n = 1u64 << k;
        let s = rough_system(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| sift(&s, n, Window::full(&s)).unwrap()));
    }
    g.finish();
}

fn bench_majorant(c: &mut Criterion) {
    let mut g = c.benchmark_group("majorant-build");
    g.sample_size(10);
    for z in [10.0, 20.0, 30.0] {
        let s = siftlab_bench::rough_system(1).at_level(z).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(z), &z, |b, &z| {
            b.iter(|| FourierMajorant::build(&s, MajorantParams::new(z.sqrt(), z), Variant::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_sift, bench_majorant);
criterion_main!(benches);
