use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dcover_bench::{field, v32_with_alpha1};
use dcover_core::arrangements::automorphism_group;
use dcover_core::hypergeometric::{f32, CharacterTable};
use dcover_core::quotients::twisted_count_h90;
use dcover_core::{bundled, count_double_cover};

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census_v32");
    group.sample_size(10);
    for p in [7u32, 11, 13] {
        let ctx = field(p);
        let spec = bundled::v32();
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| count_double_cover(&ctx, black_box(&spec)).unwrap().count)
        });
    }
    group.finish();
}

fn h90(c: &mut Criterion) {
    let mut group = c.benchmark_group("h90_alpha1");
    group.sample_size(10);
    let (spec, g) = v32_with_alpha1();
    for p in [7u32, 11] {
        let ctx = field(p);
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| twisted_count_h90(&ctx, black_box(&spec), &g, 1).unwrap().t)
        });
    }
    group.finish();
}

fn hypergeometric(c: &mut Criterion) {
    let mut group = c.benchmark_group("f32_all_lambda");
    for p in [101u32, 499] {
        let ctx = field(p);
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| {
            let table = CharacterTable::new(&ctx);
            b.iter(|| (2..p).map(|l| f32(&table, l).unwrap().as_f64(p)).sum::<f64>())
        });
    }
    group.finish();
}

fn automorphisms(c: &mut Criterion) {
    let mut group = c.benchmark_group("automorphism_search");
    group.sample_size(10);
    for (name, spec) in [("f1", bundled::f1()), ("v32", bundled::v32())] {
        group.bench_function(name, |b| b.iter(|| automorphism_group(black_box(&spec)).unwrap().pgl_order()));
    }
    group.finish();
}

criterion_group!(kernels, census, h90, hypergeometric, automorphisms);
criterion_main!(kernels);
