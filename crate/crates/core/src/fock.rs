//! Exact numerics for pure and mixed states of a single bosonic mode in a
//! truncated photon-number (Fock) basis.
//!
//! States are expanded in the number basis `|0⟩ .. |cutoff⟩`. Constructors
//! renormalize small truncation losses and fail loudly when more than
//! [`TRUNCATION_LIMIT`] of probability mass lies above the cutoff, since every
//! downstream bound is sensitive to tail mass.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Maximum probability mass that may be lost to truncation before a
/// constructor refuses to build the state.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-8;
const PSD_TOL: f64 = -1e-10;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("cutoff {cutoff} too small: {lost:.3e} probability mass above it (limit {limit:.0e})")]
    CutoffTooSmall {
        cutoff: usize,
        lost: f64,
        limit: f64,
    },
    #[error("matrix is not Hermitian: max |m - m†| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("trace {trace} is not within {tol:.0e} of 1")]
    TraceNotOne { trace: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("parameter {param} out of range: {value}")]
    ParamOutOfRange { param: &'static str, value: f64 },
    #[error("zero-norm amplitude vector")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, FockError>;

/// Pure state amplitudes in the number basis, normalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Vec<Complex64>,
    truncated_mass: f64,
}

impl FockVector {
    /// Builds a state from raw amplitudes, renormalizing them. The caller's
    /// vector is taken to be the whole state, so no truncation loss is
    /// recorded.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_truncated_mass(amplitudes, 0.0)
    }

    fn with_truncated_mass(mut amplitudes: Vec<Complex64>, truncated_mass: f64) -> Result<Self> {
        assert!(!amplitudes.is_empty(), "amplitude vector must be non-empty");
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(FockError::ZeroNorm);
        }
        let scale = norm_sq.sqrt().recip();
        for a in &mut amplitudes {
            *a *= scale;
        }
        Ok(Self {
            amplitudes,
            truncated_mass,
        })
    }

    /// Number state `|k⟩` with the given cutoff.
    pub fn number_state(k: usize, cutoff: usize) -> Result<Self> {
        if k > cutoff {
            return Err(FockError::CutoffTooSmall {
                cutoff,
                lost: 1.0,
                limit: TRUNCATION_LIMIT,
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; cutoff + 1];
        amplitudes[k] = Complex64::ONE;
        Ok(Self {
            amplitudes,
            truncated_mass: 0.0,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Probability mass that lay above the cutoff before renormalization.
    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Photon-number probabilities `|a_k|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Density operator in the truncated number basis: Hermitian, unit trace,
/// positive semidefinite (all enforced on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        assert_eq!(matrix.nrows(), matrix.ncols(), "matrix must be square");
        assert!(matrix.nrows() > 0, "matrix must be non-empty");

        let mut herm_dev: f64 = 0.0;
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                herm_dev = herm_dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if herm_dev > HERMITICITY_TOL {
            return Err(FockError::NotHermitian {
                deviation: herm_dev,
            });
        }

        let trace: f64 = (0..matrix.nrows()).map(|i| matrix[(i, i)].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(FockError::TraceNotOne {
                trace,
                tol: TRACE_TOL,
            });
        }

        let min_eigenvalue = matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eigenvalue < PSD_TOL {
            return Err(FockError::NotPositive { min_eigenvalue });
        }

        Ok(Self { matrix })
    }

    /// Projector `|ψ⟩⟨ψ|` of a pure state.
    pub fn from_pure(psi: &FockVector) -> Self {
        let dim = psi.cutoff() + 1;
        let matrix = DMatrix::from_fn(dim, dim, |i, j| {
            psi.amplitudes[i] * psi.amplitudes[j].conj()
        });
        Self { matrix }
    }

    pub fn cutoff(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.matrix.nrows())
            .map(|i| self.matrix[(i, i)].re)
            .sum()
    }

    /// Diagonal in the number basis (photon-count distribution).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.matrix.nrows())
            .map(|i| self.matrix[(i, i)].re)
            .collect()
    }
}

/// Link and capture parameters: Alice→Bob transmissivity `eta`, Alice→Willie
/// capture fraction `gamma`, thermal occupation `n_b`, detector dark-click
/// probability `p_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub eta: f64,
    pub gamma: f64,
    pub n_b: f64,
    pub p_d: f64,
}

impl ChannelParams {
    /// Validates ranges; `gamma` defaults to `1 - eta` (Willie captures all
    /// of the transmitted energy that does not reach Bob).
    pub fn new(eta: f64, gamma: Option<f64>, n_b: f64, p_d: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(FockError::ParamOutOfRange {
                param: "eta",
                value: eta,
            });
        }
        let gamma = gamma.unwrap_or(1.0 - eta);
        if gamma <= 0.0 || gamma + eta > 1.0 + 1e-12 {
            return Err(FockError::ParamOutOfRange {
                param: "gamma",
                value: gamma,
            });
        }
        if n_b < 0.0 || !n_b.is_finite() {
            return Err(FockError::ParamOutOfRange {
                param: "n_b",
                value: n_b,
            });
        }
        if !(0.0..1.0).contains(&p_d) {
            return Err(FockError::ParamOutOfRange {
                param: "p_d",
                value: p_d,
            });
        }
        Ok(Self {
            eta,
            gamma,
            n_b,
            p_d,
        })
    }
}

/// Raw truncated coherent-state amplitudes `e^{-|α|²/2} α^k/√k!` and the
/// Poisson mass left above the cutoff. Shared by `coherent_state` and the
/// Husimi probe.
fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> (Vec<Complex64>, f64) {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut kept = 0.0;
    // a_0 = e^{-|α|²/2}; a_{k} = a_{k-1} · α/√k
    let mut a = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..=cutoff {
        if k > 0 {
            a *= alpha / (k as f64).sqrt();
        }
        kept += a.norm_sqr();
        amps.push(a);
    }
    (amps, (1.0 - kept).max(0.0))
}

/// Coherent state `|α⟩` truncated at `cutoff` and renormalized.
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<FockVector> {
    let (amps, lost) = coherent_amplitudes(alpha, cutoff);
    if lost > TRUNCATION_LIMIT {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            lost,
            limit: TRUNCATION_LIMIT,
        });
    }
    FockVector::with_truncated_mass(amps, lost)
}

/// Raw geometric (Bose–Einstein) weights `nbar^k/(1+nbar)^{1+k}` up to the
/// cutoff, without renormalization.
pub fn thermal_diagonal(nbar: f64, cutoff: usize) -> Vec<f64> {
    let mut diag = Vec::with_capacity(cutoff + 1);
    let ratio = nbar / (1.0 + nbar);
    let mut w = 1.0 / (1.0 + nbar);
    for k in 0..=cutoff {
        if k > 0 {
            w *= ratio;
        }
        diag.push(w);
    }
    diag
}

/// Smallest cutoff whose geometric tail mass is at most `tail_tol`.
pub fn thermal_cutoff_for_tail(nbar: f64, tail_tol: f64) -> usize {
    if nbar <= 0.0 {
        return 0;
    }
    let ratio = nbar / (1.0 + nbar);
    // tail above cutoff K is ratio^{K+1}
    let k = tail_tol.ln() / ratio.ln() - 1.0;
    k.max(0.0).ceil() as usize
}

/// Thermal state with mean photon number `nbar`, truncated and renormalized.
pub fn thermal_state(nbar: f64, cutoff: usize) -> Result<DensityOperator> {
    if nbar < 0.0 || !nbar.is_finite() {
        return Err(FockError::ParamOutOfRange {
            param: "nbar",
            value: nbar,
        });
    }
    let diag = thermal_diagonal(nbar, cutoff);
    let kept: f64 = diag.iter().sum();
    let lost = 1.0 - kept;
    if lost > TRUNCATION_LIMIT {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            lost,
            limit: TRUNCATION_LIMIT,
        });
    }
    let dim = cutoff + 1;
    let mut matrix = DMatrix::zeros(dim, dim);
    for (k, w) in diag.iter().enumerate() {
        matrix[(k, k)] = Complex64::new(w / kept, 0.0);
    }
    Ok(DensityOperator { matrix })
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for k in 1..=n {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    lf
}

/// `√(C(k,m) γ^m (1-γ)^{k-m})`, the beamsplitter amplitude for `m` of `k`
/// photons reflected to Willie. Binomials are taken in log space.
fn splitting_amplitude(ln_fact: &[f64], k: usize, m: usize, gamma: f64) -> f64 {
    let ln_binom = ln_fact[k] - ln_fact[m] - ln_fact[k - m];
    (0.5 * ln_binom).exp() * gamma.powf(m as f64 / 2.0) * (1.0 - gamma).powf((k - m) as f64 / 2.0)
}

/// Willie's output state for a pure input through a beamsplitter with vacuum
/// environment: propagates the exact two-mode amplitude map and traces out
/// Bob's mode. Same cutoff as the input.
pub fn beamsplitter_willie_output(input: &FockVector, gamma: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(FockError::ParamOutOfRange {
            param: "gamma",
            value: gamma,
        });
    }
    let cutoff = input.cutoff();
    let dim = cutoff + 1;
    let ln_fact = ln_factorials(cutoff);
    let mut matrix: DMatrix<Complex64> = DMatrix::zeros(dim, dim);
    // ρ^W = Σ_b |φ_b⟩⟨φ_b| with φ_b[w] = a_{w+b} √(C(w+b, b) γ^w (1-γ)^b),
    // b being Bob's photon count.
    let mut phi = vec![Complex64::ZERO; dim];
    for b in 0..=cutoff {
        for (w, slot) in phi.iter_mut().enumerate().take(cutoff - b + 1) {
            let k = w + b;
            *slot = input.amplitudes[k] * splitting_amplitude(&ln_fact, k, w, gamma);
        }
        for s in 0..=(cutoff - b) {
            for t in 0..=(cutoff - b) {
                matrix[(s, t)] += phi[s] * phi[t].conj();
            }
        }
    }
    Ok(DensityOperator { matrix })
}

/// Diagonal element `⟨s|ρ^W|s⟩ = Σ_k |a_k|² C(k,s) (1-γ)^{k-s} γ^s` of
/// Willie's beamsplitter output, evaluated directly from the input
/// amplitudes (with the convention `C(k,s) = 0` for `k < s`).
pub fn output_diagonal(input: &FockVector, gamma: f64, s: usize) -> f64 {
    let cutoff = input.cutoff();
    if s > cutoff {
        return 0.0;
    }
    let ln_fact = ln_factorials(cutoff);
    let mut sum = 0.0;
    for k in s..=cutoff {
        let ln_binom = ln_fact[k] - ln_fact[s] - ln_fact[k - s];
        let weight = ln_binom.exp() * gamma.powf(s as f64) * (1.0 - gamma).powf((k - s) as f64);
        sum += input.amplitudes[k].norm_sqr() * weight;
    }
    sum
}

/// `⟨0|ρ|0⟩`.
pub fn vacuum_overlap(rho: &DensityOperator) -> f64 {
    rho.matrix[(0, 0)].re
}

/// Husimi Q function `Q(α) = ⟨α|ρ|α⟩/π`, using the raw truncated coherent
/// probe. Errors if the probe itself loses more than the truncation limit.
pub fn husimi_q(rho: &DensityOperator, alpha: Complex64) -> Result<f64> {
    let (_, lost) = coherent_amplitudes(alpha, rho.cutoff());
    if lost > TRUNCATION_LIMIT {
        return Err(FockError::CutoffTooSmall {
            cutoff: rho.cutoff(),
            lost,
            limit: TRUNCATION_LIMIT,
        });
    }
    Ok(husimi_q_supported(rho, alpha))
}

/// Husimi Q without the probe-truncation check. Exact whenever `rho` is
/// supported at or below its cutoff, since the probe's higher components
/// multiply zero matrix entries.
pub(crate) fn husimi_q_supported(rho: &DensityOperator, alpha: Complex64) -> f64 {
    let (probe, _) = coherent_amplitudes(alpha, rho.cutoff());
    let mut acc = Complex64::ZERO;
    for (j, pj) in probe.iter().enumerate() {
        for (k, pk) in probe.iter().enumerate() {
            acc += pj.conj() * rho.matrix[(j, k)] * pk;
        }
    }
    acc.re / std::f64::consts::PI
}

/// States exposing a photon-number distribution.
pub trait PhotonDistribution {
    fn photon_probabilities(&self) -> Vec<f64>;
}

impl PhotonDistribution for FockVector {
    fn photon_probabilities(&self) -> Vec<f64> {
        self.probabilities()
    }
}

impl PhotonDistribution for DensityOperator {
    fn photon_probabilities(&self) -> Vec<f64> {
        self.diagonal()
    }
}

/// Mean and variance of the photon number, from diagonal probabilities.
pub fn photon_moments(state: &impl PhotonDistribution) -> (f64, f64) {
    let probs = state.photon_probabilities();
    let mean: f64 = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let second: f64 = probs
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64) * (k as f64) * p)
        .sum();
    (mean, second - mean * mean)
}
