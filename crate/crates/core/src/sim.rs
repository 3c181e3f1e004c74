//! Deterministic, seedable Monte Carlo simulation of Alice's codebooks,
//! Willie's detectors (photon counting, heterodyne radiometer, dark-count
//! click counting) and Bob's receivers (homodyne ML, direct-detection ML).
//!
//! Every sampler derives its randomness from a counter-based substream of
//! the master seed, keyed by purpose and trial index. Trials are therefore
//! independent of scheduling, and aggregation is by counting, so results are
//! bit-identical for any worker-pool size.

use crate::bounds;
use crate::exec;
use crate::fock::{self, ChannelParams, FockVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric, Normal};
use statrs::distribution::{Binomial as BinomialDist, DiscreteCDF};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("degenerate slot mask: no symbol periods selected")]
    DegenerateMask,
    #[error("rejection budget exceeded: {proposals} proposals without acceptance")]
    RejectionBudgetExceeded { proposals: u32 },
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error(transparent)]
    Fock(#[from] fock::FockError),
}

pub type Result<T> = std::result::Result<T, SimError>;

/// Purpose tags for substream derivation. Distinct tags decorrelate streams
/// that share a trial index.
mod stream {
    pub const CODEBOOK_ROW: u64 = 1;
    pub const TRIAL_CODEBOOK: u64 = 2;
    pub const MESSAGE: u64 = 3;
    pub const WILLIE_COUNTS: u64 = 4;
    pub const HETERODYNE: u64 = 5;
    pub const HOMODYNE_NOISE: u64 = 6;
    pub const SLOT_MASK: u64 = 7;
    pub const OOK_ROW: u64 = 8;
    pub const DARKCOUNT: u64 = 9;
    pub const BAC_CHANNEL: u64 = 10;
    pub const REJECTION: u64 = 11;
    pub const RADIOMETER_H0: u64 = 12;
    pub const RADIOMETER_H1: u64 = 13;
}

/// Counter-based substream split: (seed, purpose, index) keys a ChaCha8
/// stream, so any trial can be generated independently of the others.
fn substream(seed: u64, purpose: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

const WILSON_Z: f64 = 1.959963984540054;

/// Monte Carlo estimate with a 95% Wilson confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub estimate: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl SimEstimate {
    pub fn from_counts(successes: u64, trials: u64, seed: u64) -> Self {
        assert!(trials > 0, "trials must be positive");
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = WILSON_Z * WILSON_Z;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Self {
            estimate: p,
            trials,
            ci_low: (center - half).max(0.0),
            ci_high: (center + half).min(1.0),
            seed,
        }
    }

    /// Standard error implied by the Wilson interval width. Nonzero even at
    /// empirical rates of 0 or 1.
    pub fn std_error(&self) -> f64 {
        (self.ci_high - self.ci_low) / (2.0 * WILSON_Z)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    H0,
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodebookKind {
    GaussianCoherent,
    OokTwoStage,
}

/// Random codebook of complex symbol amplitudes, M codewords by n symbols.
#[derive(Debug, Clone)]
pub struct Codebook {
    pub kind: CodebookKind,
    pub codewords: Vec<Vec<Complex64>>,
    /// Selected symbol periods (two-stage OOK only).
    pub slot_mask: Option<Vec<bool>>,
    /// Mean photons per channel use the construction aims at.
    pub nbar_target: f64,
    pub seed: u64,
}

/// Gaussian coherent codebook: entries i.i.d. circular complex Gaussian
/// with `E|α|² = nbar`.
pub fn gen_gaussian_codebook(m: usize, n: usize, nbar: f64, seed: u64) -> Codebook {
    assert!(m >= 2 && n >= 1 && nbar > 0.0);
    let normal = Normal::new(0.0, (nbar / 2.0).sqrt()).unwrap();
    let codewords = exec::map_indexed(m, |row| {
        let mut rng = substream(seed, stream::CODEBOOK_ROW, row as u64);
        (0..n)
            .map(|_| Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng)))
            .collect()
    });
    Codebook {
        kind: CodebookKind::GaussianCoherent,
        codewords,
        slot_mask: None,
        nbar_target: nbar,
        seed,
    }
}

/// Two-stage OOK codebook: slot mask drawn Bernoulli(`slot_prob`) first, the
/// on-slot amplitude then fixed by the realized `τ`; on selected slots each
/// codeword is independently `|α⟩` with probability `q`, vacuum otherwise.
#[allow(clippy::too_many_arguments)]
pub fn gen_ook_codebook(
    m: usize,
    n: usize,
    slot_prob: f64,
    q: f64,
    epsilon: f64,
    eta: f64,
    p_d: f64,
    seed: u64,
) -> Result<Codebook> {
    assert!(m >= 2 && n >= 1);
    assert!(
        slot_prob < 1.0,
        "slot probability c/sqrt(n) must be below 1"
    );
    let mut mask_rng = substream(seed, stream::SLOT_MASK, 0);
    let slot_mask: Vec<bool> = (0..n).map(|_| mask_rng.gen_bool(slot_prob)).collect();
    let tau = slot_mask.iter().filter(|&&b| b).count();
    if tau == 0 {
        return Err(SimError::DegenerateMask);
    }
    let alpha_sq = bounds::ook_twostage_alpha(n as f64, tau as f64, epsilon, eta, p_d)?;
    let alpha = Complex64::new(alpha_sq.sqrt(), 0.0);
    let codewords = exec::map_indexed(m, |row| {
        let mut rng = substream(seed, stream::OOK_ROW, row as u64);
        slot_mask
            .iter()
            .map(|&selected| {
                if selected && rng.gen_bool(q) {
                    alpha
                } else {
                    Complex64::ZERO
                }
            })
            .collect()
    });
    let nbar_target = q * bounds::covert_nbar_darkcount(epsilon, eta, p_d, n as f64)?;
    Ok(Codebook {
        kind: CodebookKind::OokTwoStage,
        codewords,
        slot_mask: Some(slot_mask),
        nbar_target,
        seed,
    })
}

fn willie_means(params: &ChannelParams, nbar: f64, hypothesis: Hypothesis) -> f64 {
    let noise = params.eta * params.n_b;
    match hypothesis {
        Hypothesis::H0 => noise,
        Hypothesis::H1 => params.gamma * nbar + noise,
    }
}

fn sample_geometric_counts(rng: &mut ChaCha8Rng, mean: f64, n: usize) -> Vec<u64> {
    let p = 1.0 / (1.0 + mean);
    let geom = Geometric::new(p).unwrap();
    (0..n).map(|_| geom.sample(rng)).collect()
}

/// i.i.d. geometric (Bose–Einstein) photon counts at Willie's number-
/// resolving receiver under the given hypothesis.
pub fn sample_willie_counts(
    hypothesis: Hypothesis,
    params: &ChannelParams,
    nbar: f64,
    n: usize,
    seed: u64,
) -> Vec<u64> {
    let mut rng = substream(seed, stream::WILLIE_COUNTS, 0);
    sample_geometric_counts(&mut rng, willie_means(params, nbar, hypothesis), n)
}

/// Smallest total count at which the likelihood ratio between the product
/// geometric laws (means `m1 > m0 > 0`) favors H1.
pub fn lrt_count_threshold(m0: f64, m1: f64, n: usize) -> u64 {
    assert!(m1 > m0 && m0 > 0.0);
    let num = n as f64 * ((m1 - m0) / (1.0 + m0)).ln_1p();
    let den = (m1 * (1.0 + m0) / (m0 * (1.0 + m1))).ln();
    (num / den).floor() as u64 + 1
}

/// One seeded trial of Willie's equal-prior likelihood-ratio test on the
/// total photon count. Returns true when the test errs.
pub fn willie_lrt_trial(
    params: &ChannelParams,
    nbar: f64,
    n: usize,
    seed: u64,
    trial: u64,
) -> bool {
    let m0 = willie_means(params, nbar, Hypothesis::H0);
    let m1 = willie_means(params, nbar, Hypothesis::H1);
    let mut rng = substream(seed, stream::WILLIE_COUNTS, trial);
    let transmitting = rng.gen_bool(0.5);
    let mean = if transmitting { m1 } else { m0 };
    let total: u64 = sample_geometric_counts(&mut rng, mean, n).iter().sum();
    let decide_h1 = if m1 > m0 {
        total >= lrt_count_threshold(m0, m1, n)
    } else {
        // Identical hypotheses: the likelihood ratio is 1 everywhere; fix
        // the tie-break at H0.
        false
    };
    decide_h1 != transmitting
}

/// Monte Carlo estimate of Willie's optimal count-test error.
pub fn willie_lrt_error(
    params: &ChannelParams,
    nbar: f64,
    n: usize,
    trials: u64,
    seed: u64,
) -> SimEstimate {
    let errors = exec::count_matching(trials, |t| willie_lrt_trial(params, nbar, n, seed, t));
    SimEstimate::from_counts(errors, trials, seed)
}

/// log pmf iteration for the total count T ~ NegativeBinomial(n, mean m):
/// sums P(T = t) for t in 0..k.
fn negative_binomial_cdf_below(n: usize, mean: f64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let nf = n as f64;
    let log_ratio = (mean / (1.0 + mean)).ln();
    let mut log_pmf = -nf * mean.ln_1p();
    let mut cdf = 0.0;
    for t in 0..k {
        if log_pmf > -745.0 {
            cdf += log_pmf.exp();
        }
        let tf = t as f64;
        log_pmf += ((tf + nf) / (tf + 1.0)).ln() + log_ratio;
    }
    cdf.min(1.0)
}

/// Exact error of the optimal equal-prior count test between the two
/// geometric product laws, via the negative-binomial law of the total count.
pub fn willie_lrt_error_exact(params: &ChannelParams, nbar: f64, n: usize) -> f64 {
    let m0 = willie_means(params, nbar, Hypothesis::H0);
    let m1 = willie_means(params, nbar, Hypothesis::H1);
    if m1 <= m0 {
        return 0.5;
    }
    let k = lrt_count_threshold(m0, m1, n);
    let miss_h0 = 1.0 - negative_binomial_cdf_below(n, m0, k);
    let miss_h1 = negative_binomial_cdf_below(n, m1, k);
    0.5 * (miss_h0 + miss_h1)
}

fn sample_heterodyne_with(
    rng: &mut ChaCha8Rng,
    symbols: &[Complex64],
    gamma: f64,
    n_b: f64,
) -> Vec<Complex64> {
    let v = 1.0 + (1.0 - gamma) * n_b;
    let normal = Normal::new(0.0, (v / 2.0).sqrt()).unwrap();
    let root_gamma = gamma.sqrt();
    symbols
        .iter()
        .map(|alpha| {
            Complex64::new(
                root_gamma * alpha.re + normal.sample(rng),
                root_gamma * alpha.im + normal.sample(rng),
            )
        })
        .collect()
}

/// Heterodyne readings of coherent codeword symbols through Willie's
/// channel: `y ~ CN(√γ·α, 1 + (1−γ)N_B)` per symbol.
pub fn sample_heterodyne(symbols: &[Complex64], gamma: f64, n_b: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = substream(seed, stream::HETERODYNE, 0);
    sample_heterodyne_with(&mut rng, symbols, gamma, n_b)
}

const REJECTION_BUDGET: u32 = 1000;

/// Heterodyne readings for a number-basis (non-coherent) input state:
/// rejection-samples the Husimi Q function of the pure-loss beamsplitter
/// output against a Gaussian envelope, then adds the thermal component as
/// Gaussian noise. The envelope constant is an analytic bound, so samples
/// are exact.
pub fn sample_heterodyne_fock(
    state: &FockVector,
    gamma: f64,
    n_b: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<Complex64>> {
    let rho_out = fock::beamsplitter_willie_output(state, gamma)?;
    let k_max = rho_out.cutoff();
    let envelope_var = k_max as f64 + 2.0;
    let c = 1.0 - 1.0 / envelope_var;
    // ratio Q/envelope ≤ σ_e²(K+1)·max_k (k/(c·e))^k/k!
    let mut peak: f64 = 1.0;
    for k in 1..=k_max {
        let kf = k as f64;
        let log_val = kf * (kf / (c * std::f64::consts::E)).ln() - ln_factorial(k);
        peak = peak.max(log_val.exp());
    }
    let bound_m = envelope_var * (k_max as f64 + 1.0) * peak;
    let env_normal = Normal::new(0.0, (envelope_var / 2.0).sqrt()).unwrap();
    let thermal_var = (1.0 - gamma) * n_b;
    let noise = if thermal_var > 0.0 {
        Some(Normal::new(0.0, (thermal_var / 2.0).sqrt()).unwrap())
    } else {
        None
    };
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let mut rng = substream(seed, stream::REJECTION, i as u64);
        let mut accepted = None;
        for _ in 0..REJECTION_BUDGET {
            let alpha = Complex64::new(env_normal.sample(&mut rng), env_normal.sample(&mut rng));
            let env_density =
                (-alpha.norm_sqr() / envelope_var).exp() / (std::f64::consts::PI * envelope_var);
            let q = fock::husimi_q_supported(&rho_out, alpha);
            if rng.gen::<f64>() * bound_m * env_density <= q {
                accepted = Some(alpha);
                break;
            }
        }
        let mut y = accepted.ok_or(SimError::RejectionBudgetExceeded {
            proposals: REJECTION_BUDGET,
        })?;
        if let Some(noise) = &noise {
            y += Complex64::new(noise.sample(&mut rng), noise.sample(&mut rng));
        }
        out.push(y);
    }
    Ok(out)
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Radiometer decision on a block of readings: H1 iff the mean squared
/// magnitude reaches `1 + (1−γ)N_B + t`.
pub fn willie_radiometer(readings: &[Complex64], gamma: f64, n_b: f64, t: f64) -> Hypothesis {
    let s: f64 = readings.iter().map(|y| y.norm_sqr()).sum::<f64>() / readings.len() as f64;
    if s >= 1.0 + (1.0 - gamma) * n_b + t {
        Hypothesis::H1
    } else {
        Hypothesis::H0
    }
}

/// Empirical radiometer false-alarm and missed-detection rates at threshold
/// offset `t`, with H1 sending fixed-amplitude coherent symbols `|α|² = nbar`.
#[allow(clippy::too_many_arguments)]
pub fn radiometer_rates(
    gamma: f64,
    n_b: f64,
    n: usize,
    t: f64,
    nbar: f64,
    trials: u64,
    seed: u64,
) -> (SimEstimate, SimEstimate) {
    let vacuum = vec![Complex64::ZERO; n];
    let fa = exec::count_matching(trials, |trial| {
        let mut rng = substream(seed, stream::RADIOMETER_H0, trial);
        let readings = sample_heterodyne_with(&mut rng, &vacuum, gamma, n_b);
        willie_radiometer(&readings, gamma, n_b, t) == Hypothesis::H1
    });
    let signal = vec![Complex64::new(nbar.sqrt(), 0.0); n];
    let md = exec::count_matching(trials, |trial| {
        let mut rng = substream(seed, stream::RADIOMETER_H1, trial);
        let readings = sample_heterodyne_with(&mut rng, &signal, gamma, n_b);
        willie_radiometer(&readings, gamma, n_b, t) == Hypothesis::H0
    });
    (
        SimEstimate::from_counts(fa, trials, seed),
        SimEstimate::from_counts(md, trials, seed),
    )
}

/// One homodyne block transmission and ML decode. The received amplitude of
/// symbol `α` is `√2·Re(α)` against noise of variance `sigma_sq`, so the
/// per-symbol SNR is `n̄/(2σ²)` for a codebook of mean photon number `n̄`.
/// Returns the decoded index (ties to the smaller index).
pub fn bob_homodyne_trial(
    codebook: &Codebook,
    sigma_sq: f64,
    message: usize,
    seed: u64,
    trial: u64,
) -> usize {
    let mut rng = substream(seed, stream::HOMODYNE_NOISE, trial);
    let noise = Normal::new(0.0, sigma_sq.sqrt()).unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    let received: Vec<f64> = codebook.codewords[message]
        .iter()
        .map(|a| sqrt2 * a.re + noise.sample(&mut rng))
        .collect();
    let mut best = (f64::INFINITY, 0);
    for (m, word) in codebook.codewords.iter().enumerate() {
        let dist: f64 = word
            .iter()
            .zip(&received)
            .map(|(a, r)| {
                let d = r - sqrt2 * a.re;
                d * d
            })
            .sum();
        if dist < best.0 {
            best = (dist, m);
        }
    }
    best.1
}

/// Ensemble-average homodyne ML error: a fresh Gaussian codebook, uniform
/// message and fresh noise per trial.
#[allow(clippy::too_many_arguments)]
pub fn bob_homodyne_error(
    m: usize,
    n: usize,
    nbar: f64,
    sigma_sq: f64,
    trials: u64,
    seed: u64,
) -> SimEstimate {
    let errors = exec::count_matching(trials, |trial| {
        let mut picker = substream(seed, stream::MESSAGE, trial);
        let cb_seed: u64 = substream(seed, stream::TRIAL_CODEBOOK, trial).gen();
        let codebook = gen_gaussian_codebook(m, n, nbar, cb_seed);
        let message = picker.gen_range(0..m);
        bob_homodyne_trial(&codebook, sigma_sq, message, seed, trial) != message
    });
    SimEstimate::from_counts(errors, trials, seed)
}

/// Click probability under H1 for the dark-count-limited direct detector:
/// `p_d + q(1−p_d)(1−e^{−(1−η)|α|²})`.
pub fn darkcount_p1(q: f64, alpha_sq: f64, eta: f64, p_d: f64) -> f64 {
    p_d + q * (1.0 - p_d) * (1.0 - (-(1.0 - eta) * alpha_sq).exp())
}

/// Smallest click count at which the binomial likelihood ratio favors H1.
pub fn binomial_lrt_threshold(n: usize, p0: f64, p1: f64) -> u64 {
    assert!(p1 > p0 && p0 > 0.0 && p1 < 1.0);
    let num = n as f64 * ((1.0 - p0) / (1.0 - p1)).ln();
    let den = (p1 * (1.0 - p0) / (p0 * (1.0 - p1))).ln();
    (num / den).floor() as u64 + 1
}

/// Monte Carlo estimate of Willie's optimal equal-prior test error on total
/// click counts, Binomial(n, p_d) vs Binomial(n, p1).
#[allow(clippy::too_many_arguments)]
pub fn willie_darkcount_test(
    q: f64,
    alpha_sq: f64,
    eta: f64,
    p_d: f64,
    n: usize,
    trials: u64,
    seed: u64,
) -> SimEstimate {
    let p1 = darkcount_p1(q, alpha_sq, eta, p_d);
    let k = binomial_lrt_threshold(n, p_d, p1);
    let errors = exec::count_matching(trials, |trial| {
        let mut rng = substream(seed, stream::DARKCOUNT, trial);
        let transmitting = rng.gen_bool(0.5);
        let p = if transmitting { p1 } else { p_d };
        let clicks = Binomial::new(n as u64, p).unwrap().sample(&mut rng);
        let decide_h1 = clicks >= k;
        decide_h1 != transmitting
    });
    SimEstimate::from_counts(errors, trials, seed)
}

/// Exact error of the same test via cumulative binomial evaluation.
/// Supported up to n = 10⁶.
pub fn exact_binomial_error(n: usize, p0: f64, p1: f64) -> f64 {
    assert!(
        n <= 1_000_000,
        "cumulative binomial evaluation capped at n = 1e6"
    );
    if p1 <= p0 {
        return 0.5;
    }
    let k = binomial_lrt_threshold(n, p0, p1);
    let cdf = |p: f64| {
        BinomialDist::new(p, n as u64)
            .expect("valid binomial")
            .cdf(k - 1)
    };
    0.5 * ((1.0 - cdf(p0)) + cdf(p1))
}

/// One OOK block through the binary asymmetric channel and exact
/// log-likelihood ML decode. `on_slots[m][i]` marks codeword m sending
/// `|α⟩` in slot i. Returns the decoded index (ties to the smaller index).
#[allow(clippy::too_many_arguments)]
pub fn bob_bac_trial(
    on_slots: &[Vec<bool>],
    alpha_sq: f64,
    eta: f64,
    p_b: f64,
    message: usize,
    seed: u64,
    trial: u64,
) -> usize {
    let mut rng = substream(seed, stream::BAC_CHANNEL, trial);
    let no_click_on = (-eta * alpha_sq).exp() * (1.0 - p_b);
    let clicks: Vec<bool> = on_slots[message]
        .iter()
        .map(|&on| {
            if on {
                !rng.gen_bool(no_click_on)
            } else {
                rng.gen_bool(p_b)
            }
        })
        .collect();
    // LL(m) = Σ ll_off + Σ_{on slots} Δ(click); the first sum is common.
    let delta_click = (1.0 - no_click_on).ln() - p_b.ln();
    let delta_no_click = no_click_on.ln() - (1.0 - p_b).ln();
    let mut best = (f64::NEG_INFINITY, 0);
    for (m, word) in on_slots.iter().enumerate() {
        let ll: f64 = word
            .iter()
            .zip(&clicks)
            .filter(|(&on, _)| on)
            .map(|(_, &click)| if click { delta_click } else { delta_no_click })
            .sum();
        if ll > best.0 {
            best = (ll, m);
        }
    }
    best.1
}

/// Ensemble-average ML error over i.i.d. Bernoulli(q) OOK codebooks on the
/// binary asymmetric channel.
#[allow(clippy::too_many_arguments)]
pub fn bob_bac_error(
    m: usize,
    n_slots: usize,
    q: f64,
    alpha_sq: f64,
    eta: f64,
    p_b: f64,
    trials: u64,
    seed: u64,
) -> SimEstimate {
    let errors = exec::count_matching(trials, |trial| {
        let cb_seed: u64 = substream(seed, stream::TRIAL_CODEBOOK, trial).gen();
        let on_slots: Vec<Vec<bool>> = (0..m)
            .map(|row| {
                let mut rng = substream(cb_seed, stream::OOK_ROW, row as u64);
                (0..n_slots).map(|_| rng.gen_bool(q)).collect()
            })
            .collect();
        let mut picker = substream(seed, stream::MESSAGE, trial);
        let message = picker.gen_range(0..m);
        bob_bac_trial(&on_slots, alpha_sq, eta, p_b, message, seed, trial) != message
    });
    SimEstimate::from_counts(errors, trials, seed)
}
