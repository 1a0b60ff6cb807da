use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use se2sr_core::elliptic::{Elliptic, Modulus};
use se2sr_core::jacobian::p11;
use se2sr_core::synthesis::{solve_generic, sample_sphere};
use se2sr_core::{conj_time, cut_time, distance, exp, Covector, Pose};

fn elliptic(c: &mut Criterion) {
    let mut g = c.benchmark_group("elliptic");
    for k in [0.3, 0.99, 1.0 - 1e-9] {
        let ell = Elliptic::new(Modulus::new(k).unwrap());
        g.bench_with_input(BenchmarkId::new("complete", k), &k, |b, &k| {
            b.iter(|| Elliptic::new(Modulus::new(black_box(k)).unwrap()).big_k())
        });
        g.bench_with_input(BenchmarkId::new("jacobi", k), &ell, |b, ell| b.iter(|| ell.jacobi(black_box(1.7))));
        g.bench_with_input(BenchmarkId::new("incomplete_e", k), &ell, |b, ell| b.iter(|| ell.e(black_box(1.2))));
    }
    g.finish();
}

fn times(c: &mut Criterion) {
    let rot = Covector::new(0.4, 2.6);
    let osc = Covector::new(0.4, 0.9);
    c.bench_function("p11", |b| b.iter(|| p11(black_box(0.7))));
    c.bench_function("cut_time", |b| b.iter(|| cut_time(black_box(osc))));
    c.bench_function("conj_time", |b| b.iter(|| conj_time(black_box(rot))));
}

fn geodesics(c: &mut Criterion) {
    let mut g = c.benchmark_group("exp");
    for t in [1.0, 5.0, 20.0] {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| exp(black_box(Covector::new(1.1, -0.7)), t))
        });
    }
    g.finish();
}

fn synthesis(c: &mut Criterion) {
    let mut g = c.benchmark_group("synthesis");
    g.sample_size(20);
    // warm the seed table outside the measurement
    let _ = distance(Pose::new(0.3, 0.2, 0.4));
    g.bench_function("generic", |b| b.iter(|| solve_generic(black_box(Pose::new(0.3, 0.2, 0.4)), 1e-10)));
    g.bench_function("special_theta_pi", |b| b.iter(|| distance(black_box(Pose::new(0.7, -0.4, std::f64::consts::PI)))));
    g.bench_function("sphere_n8", |b| b.iter(|| sample_sphere(black_box(2.0), 8)));
    g.finish();
}

criterion_group!(benches, elliptic, times, geodesics, synthesis);
criterion_main!(benches);
