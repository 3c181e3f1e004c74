//! Rayon fan-out against the single-thread fallback on the two workloads
//! that dominate simulation time: Willie's count-test trials and Bob's
//! homodyne decoding trials.

use covert_photon_core::fock::ChannelParams;
use covert_photon_core::{bounds, exec, sim};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn willie_lrt_trials(c: &mut Criterion) {
    let params = ChannelParams::new(0.5, None, 1.0, 1e-7).unwrap();
    let n = 1024;
    let nbar = bounds::covert_nbar_thermal(0.1, 0.5, 1.0, n as f64).unwrap();
    let trials = 4_000u64;
    let mut group = c.benchmark_group("willie_lrt_4k_trials_n1024");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", trials), |b| {
        b.iter(|| {
            exec::count_matching_seq(trials, |t| sim::willie_lrt_trial(&params, nbar, n, 1, t))
        })
    });
    group.bench_function(BenchmarkId::new("parallel", trials), |b| {
        b.iter(|| {
            exec::count_matching_par(trials, |t| sim::willie_lrt_trial(&params, nbar, n, 1, t))
        })
    });
    group.finish();
}

fn bob_homodyne_trials(c: &mut Criterion) {
    let (m, n) = (16usize, 512usize);
    let nbar = 0.05;
    let sigma_sq = bounds::homodyne_noise_power(0.5, 1.0).unwrap();
    let trial = |t: u64| {
        let codebook = sim::gen_gaussian_codebook(m, n, nbar, t);
        let message = (t % m as u64) as usize;
        sim::bob_homodyne_trial(&codebook, sigma_sq, message, 3, t) != message
    };
    let trials = 1_000u64;
    let mut group = c.benchmark_group("bob_homodyne_1k_trials_n512");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("sequential", trials), |b| {
        b.iter(|| exec::count_matching_seq(trials, trial))
    });
    group.bench_function(BenchmarkId::new("parallel", trials), |b| {
        b.iter(|| exec::count_matching_par(trials, trial))
    });
    group.finish();
}

fn sweep_rows(c: &mut Criterion) {
    let cells: Vec<(f64, f64, f64)> = (0..512)
        .map(|i| {
            let n = 1e10 * 1.05f64.powi(i % 128);
            let eps = [0.01, 0.05, 0.1, 0.2][(i / 128) as usize % 4];
            (eps, 0.1, n)
        })
        .collect();
    let row = |i: usize| {
        let (eps, delta, n) = cells[i];
        bounds::bits_homodyne(n, eps, delta, 0.1, 1e-6)
            .unwrap()
            .bits_exact
    };
    let mut group = c.benchmark_group("sweep_512_rows");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| exec::map_indexed_seq(cells.len(), row))
    });
    group.bench_function("parallel", |b| {
        b.iter(|| exec::map_indexed_par(cells.len(), row))
    });
    group.finish();
}

criterion_group!(benches, willie_lrt_trials, bob_homodyne_trials, sweep_rows);
criterion_main!(benches);
