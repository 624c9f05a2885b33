use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use c3_core::exactmath::{rank, Matrix, Rational};
use c3_core::liealg::build_c3;
use c3_core::pipeline::{map_with_workers, verify_models};

fn matrices(n: usize, size: usize) -> Vec<Matrix<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    (0..n)
        .map(|_| {
            let rows = (0..size)
                .map(|_| (0..size).map(|_| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5)).unwrap()).collect())
                .collect();
            Matrix::from_rows(rows, size).unwrap()
        })
        .collect()
}

fn elimination(c: &mut Criterion) {
    let ms = matrices(16, 16);
    let mut g = c.benchmark_group("rank of 16 rational 16x16 matrices");
    g.sample_size(20);
    for workers in [1, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| map_with_workers(ms.clone(), w, |m| rank(&m)))
        });
    }
    g.finish();
}

fn models(c: &mut Criterion) {
    let c3 = build_c3();
    let mut g = c.benchmark_group("model verification");
    g.sample_size(10);
    for workers in [1, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(workers), &workers, |b, &w| {
            b.iter(|| verify_models(&c3, None, w).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, elimination, models);
criterion_main!(benches);
