use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use bhlower_bench::{bench_config, patterned_form};
use bhlower_core::{build_extremal_form, family_norm_certificate, mixed_norm, sup_norm_exact};
use num_rational::Rational64;

fn construct(c: &mut Criterion) {
    let cfg = bench_config();
    let mut group = c.benchmark_group("build_extremal_form");
    for m in [4u32, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| build_extremal_form(black_box(m), &cfg).unwrap())
        });
    }
    group.finish();
}

fn exact_norm(c: &mut Criterion) {
    let cfg = bench_config();
    let t3 = build_extremal_form(3, &cfg).unwrap();
    c.bench_function("sup_norm_exact/T_3", |b| {
        b.iter(|| sup_norm_exact(black_box(&t3), &cfg).unwrap())
    });

    let dense = patterned_form(4, 4);
    c.bench_function("sup_norm_exact/patterned_4x4", |b| {
        b.iter(|| sup_norm_exact(black_box(&dense), &cfg).unwrap())
    });

    let t4 = build_extremal_form(4, &cfg).unwrap();
    let mut group = c.benchmark_group("sup_norm_exact/T_4");
    group.sample_size(10);
    for threads in [1usize, 4] {
        let cfg = cfg.clone().with_threads(threads);
        group.bench_with_input(BenchmarkId::new("threads", threads), &threads, |b, _| {
            b.iter(|| sup_norm_exact(black_box(&t4), &cfg).unwrap())
        });
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let cfg = bench_config();
    c.bench_function("family_norm_certificate/8", |b| {
        b.iter(|| family_norm_certificate(black_box(8), &cfg).unwrap())
    });
    let t8 = build_extremal_form(8, &cfg).unwrap();
    c.bench_function("mixed_norm/T_8", |b| {
        b.iter(|| mixed_norm(black_box(&t8), Rational64::new(16, 9)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = construct, exact_norm, certificates
}
criterion_main!(benches);
