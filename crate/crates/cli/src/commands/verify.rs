//! `verify`: closed forms against their independent numeric oracles, one
//! table row per check. Exits 4 on any failure.

use crate::CliError;
use covert_photon_core::fock::{self, FockVector};
use covert_photon_core::{bounds, metrics, oracle, sim};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

struct Check {
    name: &'static str,
    deviation: f64,
    tolerance: f64,
}

const GRID_ETA: [f64; 3] = [0.1, 0.5, 0.9];
const GRID_NB: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
const GRID_NBAR: [f64; 3] = [1e-4, 1e-2, 0.1];

fn random_state(rng: &mut ChaCha8Rng, max_cutoff: usize) -> FockVector {
    loop {
        let cutoff = rng.gen_range(1..=max_cutoff);
        let amps: Vec<Complex64> = (0..=cutoff)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(v) = FockVector::from_amplitudes(amps) {
            return v;
        }
    }
}

fn qre_closed_vs_sum() -> Check {
    let mut worst: f64 = 0.0;
    for &eta in &GRID_ETA {
        for &n_b in &GRID_NB {
            for &nbar in &GRID_NBAR {
                let closed = bounds::qre_thermal_closed(nbar, eta, n_b).unwrap();
                let mean_h1 = eta * n_b + (1.0 - eta) * nbar;
                let cutoff = fock::thermal_cutoff_for_tail(mean_h1, 1e-30).max(200);
                let summed = oracle::qre_thermal_diagonal(nbar, eta, n_b, cutoff);
                worst = worst.max((closed - summed).abs() / summed);
            }
        }
    }
    Check {
        name: "qre_closed_vs_fock_sum(rel)",
        deviation: worst,
        tolerance: 1e-9,
    }
}

fn beamsplitter_diag_vs_matrix() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = random_state(&mut rng, 20);
        for &gamma in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = fock::beamsplitter_willie_output(&psi, gamma).unwrap();
            for (s, &d) in rho.diagonal().iter().enumerate() {
                let direct = fock::output_diagonal(&psi, gamma, s);
                worst = worst.max((direct - d).abs());
            }
        }
    }
    Check {
        name: "beamsplitter_diag_two_routes",
        deviation: worst,
        tolerance: 1e-12,
    }
}

fn energy_conservation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let psi = random_state(&mut rng, 20);
        let (mean_in, _) = fock::photon_moments(&psi);
        for &gamma in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = fock::beamsplitter_willie_output(&psi, gamma).unwrap();
            let (mean_out, _) = fock::photon_moments(&rho);
            worst = worst.max((mean_out - gamma * mean_in).abs());
        }
    }
    Check {
        name: "beamsplitter_energy",
        deviation: worst,
        tolerance: 1e-10,
    }
}

fn taylor_domination() -> Check {
    let mut worst: f64 = 0.0;
    for &eta in &GRID_ETA {
        for &n_b in &GRID_NB {
            for &nbar in &[1e-4, 1e-2, 0.1, 0.5] {
                let closed = bounds::qre_thermal_closed(nbar, eta, n_b).unwrap();
                let taylor = bounds::qre_thermal_taylor_ub(nbar, eta, n_b).unwrap();
                worst = worst.max(closed - taylor);
            }
        }
    }
    Check {
        name: "taylor_dominates_closed",
        deviation: worst.max(0.0),
        tolerance: 1e-15,
    }
}

fn budget_identity() -> Check {
    let mut worst: f64 = 0.0;
    for &eps in &[0.01, 0.05, 0.1] {
        for &(eta, n_b, n) in &[(0.1, 1e-6, 1e14), (0.5, 1.0, 1e6), (0.9, 10.0, 1e4)] {
            let nbar = bounds::covert_nbar_thermal(eps, eta, n_b, n).unwrap();
            let total = n * bounds::qre_thermal_taylor_ub(nbar, eta, n_b).unwrap();
            worst = worst.max((total - 8.0 * eps * eps).abs());
        }
    }
    Check {
        name: "budget_identity_8eps2",
        deviation: worst,
        tolerance: 1e-12,
    }
}

fn husimi_thermal_closed_form() -> Check {
    let mut worst: f64 = 0.0;
    for &n in &[0.2, 0.8, 2.0] {
        let rho = fock::thermal_state(n, 120).unwrap();
        for &(re, im) in &[(0.0, 0.0), (0.6, -0.4), (1.2, 0.9)] {
            let alpha = Complex64::new(re, im);
            let q = fock::husimi_q(&rho, alpha).unwrap();
            let expected =
                (-alpha.norm_sqr() / (1.0 + n)).exp() / (std::f64::consts::PI * (1.0 + n));
            worst = worst.max((q - expected).abs());
        }
    }
    Check {
        name: "husimi_thermal_gaussian",
        deviation: worst,
        tolerance: 1e-8,
    }
}

fn pureloss_exact_vs_exponential() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..100 {
        let gamma = rng.gen_range(0.05..0.95);
        let n_sym = rng.gen_range(1..=30usize);
        let mut overlaps = Vec::new();
        let mut c_total = 0.0;
        for _ in 0..n_sym {
            let psi = random_state(&mut rng, 8);
            let rho = fock::beamsplitter_willie_output(&psi, gamma).unwrap();
            overlaps.push(fock::vacuum_overlap(&rho));
            c_total += 1.0 - psi.amplitudes()[0].norm_sqr();
        }
        let exact = bounds::willie_pe_pureloss(&overlaps);
        let ub = bounds::willie_pe_pureloss_ub(c_total, gamma);
        worst = worst.max(exact - ub);
    }
    Check {
        name: "pureloss_exact_below_bound",
        deviation: worst.max(0.0),
        tolerance: 1e-12,
    }
}

fn helstrom_vs_pinsker() -> Check {
    let mut worst = f64::NEG_INFINITY;
    for &eta in &GRID_ETA {
        for &n_b in &[0.1, 1.0] {
            for &nbar in &GRID_NBAR {
                let m0 = eta * n_b;
                let m1 = (1.0 - eta) * nbar + m0;
                let cutoff = fock::thermal_cutoff_for_tail(m1, 1e-9).max(200);
                let rho0 = fock::thermal_state(m0, cutoff).unwrap();
                let rho1 = fock::thermal_state(m1, cutoff).unwrap();
                let helstrom = metrics::helstrom_exact(&rho0, &rho1).unwrap();
                let d = bounds::qre_thermal_closed(nbar, eta, n_b).unwrap();
                let pinsker = metrics::pinsker_quantum_lb(d).lower;
                worst = worst.max(pinsker - helstrom);
            }
        }
    }
    Check {
        name: "helstrom_above_pinsker",
        deviation: worst.max(0.0),
        tolerance: 1e-9,
    }
}

fn darkcount_cre_dominance() -> Check {
    let mut worst = f64::NEG_INFINITY;
    for &q in &[0.5f64, 1.0] {
        for &alpha_sq in &[1e-6f64, 1e-5, 1e-4] {
            for &eta in &[0.0f64, 0.5] {
                for &p_d in &[1e-7f64, 1e-3] {
                    let p1 = sim::darkcount_p1(q, alpha_sq, eta, p_d);
                    let cre = metrics::cre_bernoulli(p_d, p1).unwrap();
                    let ub = bounds::cre_darkcount_ub(q, alpha_sq, eta, p_d).unwrap();
                    worst = worst.max(cre - ub);
                }
            }
        }
    }
    Check {
        name: "darkcount_cre_dominated",
        deviation: worst.max(0.0),
        tolerance: 1e-15,
    }
}

fn gallager_leading_order() -> Check {
    let (q, eta, p_b, alpha_sq) = (0.5, 0.5, 0.1, 1e-3);
    let mut worst: f64 = 0.0;
    for &s in &[0.25, 0.5, 1.0] {
        let e0 = bounds::gallager_e0_bac(s, q, eta, alpha_sq, p_b);
        let lead = (1.0 - q) * q * (1.0 - p_b) * s * eta * eta * alpha_sq * alpha_sq
            / (2.0 * p_b * (1.0 + s));
        worst = worst.max((e0 / lead - 1.0).abs());
    }
    Check {
        name: "gallager_leading_order(rel)",
        deviation: worst,
        tolerance: 1e-2,
    }
}

fn heterodyne_variance_vs_mc() -> Check {
    // Coherent |α|² = 2 through γ = 0.5, N_B = 1; deviation in units of the
    // Monte Carlo standard error.
    let samples = 200_000usize;
    let alpha = Complex64::new(2f64.sqrt(), 0.0);
    let symbols = vec![alpha; samples];
    let ys = sim::sample_heterodyne(&symbols, 0.5, 1.0, 424242);
    let y2: Vec<f64> = ys.iter().map(|y| y.norm_sqr()).collect();
    let nf = samples as f64;
    let mean: f64 = y2.iter().sum::<f64>() / nf;
    let var: f64 = y2.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
    let m4: f64 = y2.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let se = ((m4 - var * var).max(0.0) / nf).sqrt();
    let expected = bounds::heterodyne_moments(2.0, 2.0, 0.5, 1.0).variance;
    Check {
        name: "heterodyne_variance_mc(sigmas)",
        deviation: (var - expected).abs() / se,
        tolerance: 5.0,
    }
}

pub fn run(_config: Option<&Path>, corrupt_tolerances: bool) -> Result<(), CliError> {
    let mut checks = vec![
        qre_closed_vs_sum(),
        beamsplitter_diag_vs_matrix(),
        energy_conservation(),
        taylor_domination(),
        budget_identity(),
        husimi_thermal_closed_form(),
        pureloss_exact_vs_exponential(),
        helstrom_vs_pinsker(),
        darkcount_cre_dominance(),
        gallager_leading_order(),
        heterodyne_variance_vs_mc(),
    ];
    if corrupt_tolerances {
        for c in &mut checks {
            c.tolerance = 0.0;
        }
    }
    println!(
        "{:<34} {:>14} {:>12} {:>6}",
        "check", "max_deviation", "tolerance", "pass"
    );
    let mut all_pass = true;
    for c in &checks {
        let pass = c.deviation <= c.tolerance;
        all_pass &= pass;
        println!(
            "{:<34} {:>14.3e} {:>12.1e} {:>6}",
            c.name,
            c.deviation,
            c.tolerance,
            if pass { "yes" } else { "NO" }
        );
    }
    if !all_pass {
        return Err(CliError::Check("verification checks failed".into()));
    }
    Ok(())
}
