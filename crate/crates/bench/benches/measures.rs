//! Benchmarks for the hot kernels: quasiprobability grid scans, QFI
//! eigen-evaluation, channel-output coherence search, and the thermal
//! noise quadrature.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qres_core::channels::{output_max_coherence, random_channel};
use qres_core::experiments::rng::{random_density, rng_for};
use qres_core::fock::{
    beam_splitter, make_cat, make_lossy_photon_dim, thermal_noise_channel_with, ThermalOptions,
};
use qres_core::measures::{metrological_power, nc_depth, qfi_matrix, GridSpec};
use qres_core::C64;
use std::hint::black_box;

fn bench_quasiprob_depth(c: &mut Criterion) {
    let rho = make_lossy_photon_dim(0.8, 8).unwrap();
    let grid = GridSpec::default();
    c.bench_function("nc_depth_lossy_photon_61grid", |b| {
        b.iter(|| nc_depth(black_box(&rho), &grid, 5e-3).unwrap())
    });

    let mut rng = rng_for(1, 0);
    let two_mode = random_density(&mut rng, &[4, 4]);
    let grid2 = GridSpec::with_points(31);
    c.bench_function("nc_depth_two_mode_31grid", |b| {
        b.iter(|| nc_depth(black_box(&two_mode), &grid2, 2e-2).unwrap())
    });
}

fn bench_qfi(c: &mut Criterion) {
    let cat = make_cat(C64::new(3.0, 0.0), 54).unwrap().to_density();
    c.bench_function("qfi_matrix_cat_dim54", |b| {
        b.iter(|| qfi_matrix(black_box(&cat)).unwrap())
    });
    let lossy = make_lossy_photon_dim(0.7, 8).unwrap();
    c.bench_function("metrological_power_dim8", |b| {
        b.iter(|| metrological_power(black_box(&lossy)).unwrap())
    });
}

fn bench_channel_eta(c: &mut Criterion) {
    let chan = random_channel(2, 2, 4, 7).unwrap();
    c.bench_function("eta_tilde_qubit_8_starts", |b| {
        b.iter(|| output_max_coherence(black_box(&chan), 8, 3, 1e-8))
    });
}

fn bench_fock_ops(c: &mut Criterion) {
    c.bench_function("beam_splitter_build_8x8", |b| {
        b.iter(|| beam_splitter(std::f64::consts::FRAC_PI_4, 8, 8).unwrap())
    });
    let opts = ThermalOptions::default();
    let rho = make_lossy_photon_dim(0.5, 12).unwrap();
    c.bench_function("thermal_noise_dim12_order21", |b| {
        b.iter_batched(
            || rho.clone(),
            |r| thermal_noise_channel_with(&r, 0.3, opts).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    benches,
    bench_quasiprob_depth,
    bench_qfi,
    bench_channel_eta,
    bench_fock_ops
);
criterion_main!(benches);
