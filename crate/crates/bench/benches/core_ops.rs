//! Hot-path benchmarks: eigendecomposition, map application, repeatability
//! decisions, channel extraction, decomposition, and the dilation build.

use criterion::{criterion_group, criterion_main, Criterion};
use qrepeat_core::channels::{decompose_unital, QubitChannel, UnitaryMixture};
use qrepeat_core::coupling::{build_repeatable_dilation, CouplingParams, DilationSpec};
use qrepeat_core::linalg::eig::hermitian_eig;
use qrepeat_core::states::{random_density, BlochVector};
use std::f64::consts::PI;
use std::hint::black_box;

fn witness_params() -> (CouplingParams, BlochVector) {
    (
        CouplingParams::new(PI / 3.0, PI / 4.0).unwrap(),
        BlochVector::new(0.0, 0.6, 0.4).unwrap(),
    )
}

fn bench_eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    for dim in [4usize, 16, 32] {
        let m = random_density(dim, 42).matrix().clone();
        group.bench_function(format!("dim{dim}"), |b| {
            b.iter(|| hermitian_eig(black_box(&m), 1e-9).unwrap())
        });
    }
    group.finish();
}

fn bench_apply(c: &mut Criterion) {
    let (params, xi) = witness_params();
    let procedure = params.procedure(&xi).unwrap();
    let rho = random_density(2, 7);
    c.bench_function("procedure_apply_qubit_env", |b| {
        b.iter(|| procedure.apply(black_box(&rho)).unwrap())
    });

    let dilation = build_repeatable_dilation(&DilationSpec::new(params, xi).unwrap()).unwrap();
    c.bench_function("procedure_apply_dilation_env", |b| {
        b.iter(|| dilation.procedure.apply(black_box(&rho)).unwrap())
    });
}

fn bench_repeatability(c: &mut Criterion) {
    let (params, xi) = witness_params();
    let procedure = params.procedure(&xi).unwrap();
    c.bench_function("repeatability_exact", |b| {
        b.iter(|| black_box(&procedure).repeatability(1e-9).unwrap())
    });
}

fn bench_channel_extraction(c: &mut Criterion) {
    let (params, xi) = witness_params();
    let procedure = params.procedure(&xi).unwrap();
    c.bench_function("channel_from_procedure", |b| {
        b.iter(|| QubitChannel::from_procedure(black_box(&procedure)).unwrap())
    });
}

fn bench_decompose(c: &mut Criterion) {
    let channel = UnitaryMixture::random(4, 3).to_channel();
    c.bench_function("decompose_unital", |b| {
        b.iter(|| decompose_unital(black_box(&channel), 1e-9).unwrap())
    });
}

fn bench_dilation_build(c: &mut Criterion) {
    let (params, xi) = witness_params();
    let spec = DilationSpec::new(params, xi).unwrap();
    c.bench_function("build_repeatable_dilation", |b| {
        b.iter(|| build_repeatable_dilation(black_box(&spec)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_eig,
    bench_apply,
    bench_repeatability,
    bench_channel_extraction,
    bench_decompose,
    bench_dilation_build
);
criterion_main!(benches);
