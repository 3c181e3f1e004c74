//! Acceptance suite: one test per numbered criterion, each printing a
//! PASS line (run with `--nocapture` to see them). Criteria 1, 10 and 11
//! exercise the command-line interface and live in the CLI crate's
//! acceptance suite.

use covert_photon_core::fock::{self, ChannelParams, FockVector};
use covert_photon_core::{bounds, metrics, oracle, sim};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const GRID_ETA: [f64; 3] = [0.1, 0.5, 0.9];
const GRID_NB: [f64; 4] = [0.01, 0.1, 1.0, 10.0];
const GRID_NBAR: [f64; 3] = [1e-4, 1e-2, 0.1];

fn report(criterion: u32, name: &str) {
    println!("ACCEPTANCE {criterion} {name}: PASS");
}

#[test]
fn criterion_2_qre_oracle_equivalence() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &eta in &GRID_ETA {
        for &n_b in &GRID_NB {
            for &nbar in &GRID_NBAR {
                let closed = bounds::qre_thermal_closed(nbar, eta, n_b).unwrap();
                let mean_h1 = eta * n_b + (1.0 - eta) * nbar;
                let cutoff = fock::thermal_cutoff_for_tail(mean_h1, 1e-30).max(200);
                let summed = oracle::qre_thermal_diagonal(nbar, eta, n_b, cutoff);
                let rel = (closed - summed).abs() / summed;
                assert!(
                    rel <= 1e-9,
                    "relative deviation {rel} at ({eta}, {n_b}, {nbar})"
                );
                worst = worst.max(rel);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("  max relative deviation over 36-point grid: {worst:.3e} ({elapsed:?})");
    report(2, "qre closed form vs Fock-basis sum (1e-9 relative)");
}

#[test]
fn criterion_3_taylor_domination_and_budget_identity() {
    for &eta in &GRID_ETA {
        for &n_b in &GRID_NB {
            for &nbar in &[1e-4, 1e-2, 0.1, 0.5] {
                let closed = bounds::qre_thermal_closed(nbar, eta, n_b).unwrap();
                let taylor = bounds::qre_thermal_taylor_ub(nbar, eta, n_b).unwrap();
                assert!(
                    taylor >= closed,
                    "domination fails at ({eta}, {n_b}, {nbar})"
                );
            }
        }
    }
    for &eps in &[0.01, 0.05, 0.1] {
        for &(eta, n_b, n) in &[(0.1, 1e-6, 1e14), (0.5, 1.0, 1e6), (0.9, 10.0, 1e4)] {
            let nbar = bounds::covert_nbar_thermal(eps, eta, n_b, n).unwrap();
            let total = n * bounds::qre_thermal_taylor_ub(nbar, eta, n_b).unwrap();
            assert!(
                (total - 8.0 * eps * eps).abs() <= 1e-12,
                "budget identity off: {total} vs {}",
                8.0 * eps * eps
            );
            let lb = metrics::pinsker_quantum_lb(total).lower;
            assert!((lb - (0.5 - eps)).abs() <= 1e-12);
        }
    }
    report(
        3,
        "taylor bound dominates; n·D(n̄(ε)) = 8ε² so the floor is ½ − ε",
    );
}

/// Independent route for criterion 4: expand the two-mode output state on
/// the full (cutoff+1)² joint basis with Pascal-triangle binomials, then
/// trace out Bob's mode.
fn joint_space_willie_output(psi: &FockVector, gamma: f64) -> Vec<Vec<Complex64>> {
    let k_max = psi.cutoff();
    let dim = k_max + 1;
    let mut pascal = vec![vec![0.0f64; dim]; dim];
    for k in 0..dim {
        pascal[k][0] = 1.0;
        for m in 1..=k {
            pascal[k][m] = pascal[k - 1][m - 1] + if m < k { pascal[k - 1][m] } else { 0.0 };
        }
    }
    let mut joint = vec![vec![Complex64::ZERO; dim]; dim];
    for k in 0..=k_max {
        for m in 0..=k {
            let weight = pascal[k][m] * gamma.powi(m as i32) * (1.0 - gamma).powi((k - m) as i32);
            joint[m][k - m] += psi.amplitudes()[k] * weight.sqrt();
        }
    }
    let mut rho = vec![vec![Complex64::ZERO; dim]; dim];
    for s in 0..dim {
        for t in 0..dim {
            rho[s][t] = (0..dim).map(|b| joint[s][b] * joint[t][b].conj()).sum();
        }
    }
    rho
}

#[test]
#[allow(clippy::needless_range_loop)]
fn criterion_4_beamsplitter_against_joint_space_propagation() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for case in 0..100 {
        let cutoff = rng.gen_range(1..=20usize);
        let amps: Vec<Complex64> = (0..=cutoff)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let psi = match FockVector::from_amplitudes(amps) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let (mean_in, _) = fock::photon_moments(&psi);
        for &gamma in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = fock::beamsplitter_willie_output(&psi, gamma).unwrap();
            let reference = joint_space_willie_output(&psi, gamma);
            for s in 0..=cutoff {
                let direct = fock::output_diagonal(&psi, gamma, s);
                assert!(
                    (direct - reference[s][s].re).abs() <= 1e-12,
                    "case {case}: diagonal s={s} γ={gamma}"
                );
                for t in 0..=cutoff {
                    assert!(
                        (rho.matrix()[(s, t)] - reference[s][t]).norm() <= 1e-12,
                        "case {case}: entry ({s},{t}) γ={gamma}"
                    );
                }
            }
            let (mean_out, _) = fock::photon_moments(&rho);
            assert!((mean_out - gamma * mean_in).abs() <= 1e-10);
        }
    }
    report(
        4,
        "beamsplitter diagonal matches joint-space propagation (1e-12)",
    );
}

fn sample_variance_check(samples: &[f64], mean_expected: f64, var_expected: f64, label: &str) {
    let n = samples.len() as f64;
    let mean: f64 = samples.iter().sum::<f64>() / n;
    let var: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let m4: f64 = samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let se_mean = (var / n).sqrt();
    let se_var = ((m4 - var * var).max(0.0) / n).sqrt();
    assert!(
        (mean - mean_expected).abs() <= 3.0 * se_mean,
        "{label}: mean {mean} vs {mean_expected} (3σ = {:.2e})",
        3.0 * se_mean
    );
    assert!(
        (var - var_expected).abs() <= 3.0 * se_var,
        "{label}: variance {var} vs {var_expected} (3σ = {:.2e})",
        3.0 * se_var
    );
    println!(
        "  {label}: mean {mean:.5} (formula {mean_expected:.5}), var {var:.5} (formula {var_expected:.5})"
    );
}

#[test]
fn criterion_5_heterodyne_moments_match_sampling() {
    let start = Instant::now();
    let samples = 1_000_000usize;

    // Vacuum input, γ = 0.5, N_B = 1.
    let vacuum = vec![Complex64::ZERO; samples];
    let ys = sim::sample_heterodyne(&vacuum, 0.5, 1.0, 1001);
    let y2: Vec<f64> = ys.iter().map(|y| y.norm_sqr()).collect();
    let m = bounds::heterodyne_moments(0.0, 0.0, 0.5, 1.0);
    sample_variance_check(&y2, m.mean, m.variance, "vacuum");

    // Coherent |α|² = 2 (Poisson: photon variance 2), γ = 0.5, N_B = 1.
    let alpha = Complex64::new(2f64.sqrt(), 0.0);
    let coherent = vec![alpha; samples];
    let ys = sim::sample_heterodyne(&coherent, 0.5, 1.0, 1002);
    let y2: Vec<f64> = ys.iter().map(|y| y.norm_sqr()).collect();
    let m = bounds::heterodyne_moments(2.0, 2.0, 0.5, 1.0);
    sample_variance_check(&y2, m.mean, m.variance, "coherent |α|²=2");

    // Number state |3⟩ (photon variance 0), γ = 0.5, N_B = 0, via exact
    // rejection sampling of the output Q function.
    let three = FockVector::number_state(3, 3).unwrap();
    let ys = sim::sample_heterodyne_fock(&three, 0.5, 0.0, samples, 1003).unwrap();
    let y2: Vec<f64> = ys.iter().map(|y| y.norm_sqr()).collect();
    let m = bounds::heterodyne_moments(3.0, 0.0, 0.5, 0.0);
    sample_variance_check(&y2, m.mean, m.variance, "number state |3⟩");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    report(
        5,
        "heterodyne reading moments match sampling at 3σ, 1e6 samples",
    );
}

#[test]
fn criterion_6_square_root_law_desk_scale() {
    let start = Instant::now();
    let params = ChannelParams::new(0.5, None, 1.0, 1e-7).unwrap();
    let (eps, m_codewords) = (0.1, 16usize);
    let sigma_sq = bounds::homodyne_noise_power(0.5, 1.0).unwrap();
    let mut bob_errors = Vec::new();
    for (i, &n) in [256usize, 1024, 4096].iter().enumerate() {
        let nbar = bounds::covert_nbar_thermal(eps, 0.5, 1.0, n as f64).unwrap();

        let exact = sim::willie_lrt_error_exact(&params, nbar, n);
        assert!(exact >= 0.4, "n = {n}: exact error {exact}");

        let mc = sim::willie_lrt_error(&params, nbar, n, 100_000, 60_000 + i as u64);
        assert!(
            (mc.estimate - exact).abs() <= 3.0 * mc.std_error(),
            "n = {n}: estimate {} vs exact {exact} (3σ = {:.2e})",
            mc.estimate,
            3.0 * mc.std_error()
        );

        let trials = match n {
            256 => 8_000,
            1024 => 20_000,
            _ => 8_000,
        };
        let bob = sim::bob_homodyne_error(m_codewords, n, nbar, sigma_sq, trials, 600 + i as u64);
        println!(
            "  n = {n}: willie exact {exact:.5}, mc {:.5} ± {:.5}; bob error {:.5}",
            mc.estimate,
            mc.std_error(),
            bob.estimate
        );
        bob_errors.push(bob.estimate);
    }
    assert!(
        bob_errors[0] > bob_errors[1] && bob_errors[1] >= bob_errors[2],
        "bob errors not decreasing: {bob_errors:?}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    report(
        6,
        "square-root law at desk scale (willie ≥ 0.4, bob error falls)",
    );
}

#[test]
fn criterion_7_dark_count_channel() {
    // Exact discrimination error at the dark-count budget.
    let (n, p_d, q, eta, eps) = (1000usize, 1e-3, 1.0, 0.5, 0.1);
    let alpha_sq = bounds::covert_nbar_darkcount(eps, eta, p_d, n as f64).unwrap() / q;
    let p1 = sim::darkcount_p1(q, alpha_sq, eta, p_d);
    let exact = sim::exact_binomial_error(n, p_d, p1);
    assert!(exact >= 0.4, "exact error {exact}");
    println!("  exact binomial discrimination error: {exact:.5}");

    // The quadratic bound dominates the exact Bernoulli divergence.
    for &qv in &[0.5f64, 1.0] {
        for &asq in &[1e-6f64, 1e-5, 1e-4] {
            for &etav in &[0.0f64, 0.5] {
                for &pd in &[1e-7f64, 1e-3] {
                    let p1 = sim::darkcount_p1(qv, asq, etav, pd);
                    let cre = metrics::cre_bernoulli(pd, p1).unwrap();
                    let ub = bounds::cre_darkcount_ub(qv, asq, etav, pd).unwrap();
                    assert!(ub >= cre, "({qv}, {asq}, {etav}, {pd}): {ub} < {cre}");
                }
            }
        }
    }

    // Gallager exponent: exactly zero at s = 0, and the |α|⁴ leading order
    // within 1% at |α|² = 1e-3.
    assert_eq!(bounds::gallager_e0_bac(0.0, 0.5, 0.5, 0.1, 1e-3), 0.0);
    let (qb, etab, p_b, asq) = (0.5, 0.5, 0.1, 1e-3);
    for &s in &[0.25, 0.5, 1.0] {
        let e0 = bounds::gallager_e0_bac(s, qb, etab, asq, p_b);
        let lead =
            (1.0 - qb) * qb * (1.0 - p_b) * s * etab * etab * asq * asq / (2.0 * p_b * (1.0 + s));
        assert!(
            (e0 / lead - 1.0).abs() < 0.01,
            "s = {s}: {e0} vs leading order {lead}"
        );
    }
    report(
        7,
        "dark-count test error ≥ 0.4; divergence bound dominates; E₀ checks",
    );
}

#[test]
fn criterion_8_pure_loss_converse() {
    // Exact Willie error stays below ½e^{−γc} on random low-cutoff
    // codebooks.
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..100 {
        let gamma = rng.gen_range(0.05..0.95);
        let n_sym = rng.gen_range(1..=30usize);
        let mut overlaps = Vec::new();
        let mut c_total = 0.0;
        for _ in 0..n_sym {
            let cutoff = rng.gen_range(1..=8usize);
            let amps: Vec<Complex64> = (0..=cutoff)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let psi = match FockVector::from_amplitudes(amps) {
                Ok(v) => v,
                Err(_) => FockVector::number_state(0, cutoff).unwrap(),
            };
            let rho = fock::beamsplitter_willie_output(&psi, gamma).unwrap();
            overlaps.push(fock::vacuum_overlap(&rho));
            c_total += 1.0 - psi.amplitudes()[0].norm_sqr();
        }
        let exact = bounds::willie_pe_pureloss(&overlaps);
        let ub = bounds::willie_pe_pureloss_ub(c_total, gamma);
        assert!(exact <= ub + 1e-12, "exact {exact} > bound {ub}");
    }

    // Zero-budget codewords are indistinguishable from vacuum: the error
    // floor is exactly ½.
    assert_eq!(
        bounds::bob_error_lb_pureloss(0.0, 0.0, 0.5, 0.5).unwrap(),
        0.5
    );

    // Two-codeword test: each codeword spends its whole vacuum budget on
    // one in-phase symbol, so the vacuum-distance chain is tight and the
    // exact Helstrom error dominates the evaluated bound.
    let single_mode = |c: f64, cutoff: usize| {
        FockVector::from_amplitudes({
            let mut amps = vec![Complex64::ZERO; cutoff + 1];
            amps[0] = Complex64::new((-c).exp().sqrt(), 0.0);
            amps[1] = Complex64::new((1.0 - (-c).exp()).sqrt(), 0.0);
            amps
        })
        .unwrap()
    };
    for &(c_r, c_s) in &[(0.2, 0.2), (0.5, 1.0), (1.0, 1.0), (2.0, 0.3)] {
        let psi_r = single_mode(c_r, 1);
        let psi_s = single_mode(c_s, 1);
        let fidelity = metrics::fidelity_pure(&psi_r, &psi_s).unwrap();
        let helstrom = metrics::helstrom_pure(fidelity, 0.5, 0.5);
        let lb = bounds::bob_error_lb_pureloss(c_r, c_s, 0.5, 0.5).unwrap();
        assert!(
            helstrom >= lb - 1e-12,
            "(c_r, c_s) = ({c_r}, {c_s}): helstrom {helstrom} < bound {lb}"
        );
    }
    report(
        8,
        "pure-loss converse: exact ≤ ½e^{-γc}; two-codeword floor holds",
    );
}

#[test]
fn criterion_9_radiometer_chebyshev_bounds() {
    let start = Instant::now();
    let (gamma, n_b, n) = (0.5, 1.0, 10_000usize);
    let p_fa_target = 0.25;
    let (d, t) = bounds::radiometer_threshold(p_fa_target, n as f64, gamma, n_b);
    // Fixed-amplitude coherent codewords, |α|² = 0.1 per symbol.
    let nbar = 0.1;
    let (fa, md) = sim::radiometer_rates(gamma, n_b, n, t, nbar, 100_000, 900);
    assert!(
        fa.estimate <= p_fa_target + 3.0 * fa.std_error(),
        "false alarms {:.4} exceed target {p_fa_target}",
        fa.estimate
    );
    let md_bound = bounds::radiometer_md_ub(nbar, nbar, n as f64, gamma, n_b, d);
    assert!(!md_bound.clamped, "missed-detection bound is vacuous");
    assert!(
        md.estimate <= md_bound.value + 3.0 * md.std_error(),
        "missed detections {:.4} exceed bound {:.4}",
        md.estimate,
        md_bound.value
    );
    println!(
        "  FA {:.4} ≤ {p_fa_target}; MD {:.4} ≤ {:.4} (display form {:.4})",
        fa.estimate, md.estimate, md_bound.value, md_bound.display
    );
    let elapsed = start.elapsed();
    println!("  elapsed {elapsed:?}");
    report(9, "radiometer FA and MD rates respect the Chebyshev bounds");
}
