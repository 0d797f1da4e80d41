use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use halfline::specfun::{bessel_i, bessel_j, bessel_k, gamma, hankel_pm, Sign};
use halfline::Complex64;

fn bench(c: &mut Criterion) {
    let m = Complex64::new(0.3, 0.2);
    let mut group = c.benchmark_group("specfun");
    for x in [0.5, 5.0, 50.0] {
        group.bench_function(format!("bessel_k x={x}"), |b| b.iter(|| bessel_k(black_box(m), black_box(x))));
        group.bench_function(format!("bessel_i x={x}"), |b| b.iter(|| bessel_i(black_box(m), black_box(x))));
        group.bench_function(format!("bessel_j x={x}"), |b| b.iter(|| bessel_j(black_box(m), black_box(x))));
        group.bench_function(format!("hankel_pm x={x}"), |b| {
            b.iter(|| hankel_pm(black_box(m), Sign::Plus, black_box(x)))
        });
    }
    group.bench_function("gamma", |b| b.iter(|| gamma(black_box(Complex64::new(0.7, 3.0)))));
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
