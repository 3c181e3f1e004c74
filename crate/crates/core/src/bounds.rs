//! Closed-form bounds and budgets: covert photon budgets, relative-entropy
//! bounds, throughput, radiometer Chebyshev bounds, the pure-loss converse
//! chain, dark-count budgets and the Gallager exponent for the on-off-keying
//! channel.

use crate::metrics::LN_2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("domain error for {param}: {reason}")]
    Domain {
        param: &'static str,
        reason: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, BoundsError>;

fn domain(param: &'static str, reason: &'static str) -> BoundsError {
    BoundsError::Domain { param, reason }
}

/// Covertness/reliability targets and the derived per-symbol photon budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovertBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub n: u64,
    pub nbar: f64,
}

impl CovertBudget {
    /// Budget for the thermal-noise channel, with `nbar` from
    /// [`covert_nbar_thermal`].
    pub fn thermal(epsilon: f64, delta: f64, n: u64, eta: f64, n_b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) || delta == 0.0 {
            return Err(domain("delta", "must lie in (0, 1)"));
        }
        if n == 0 {
            return Err(domain("n", "must be a positive integer"));
        }
        let nbar = covert_nbar_thermal(epsilon, eta, n_b, n as f64)?;
        Ok(Self {
            epsilon,
            delta,
            n,
            nbar,
        })
    }
}

/// Covert throughput report: exact bit count, its additive decoding cost,
/// the √n coefficient in both conventions, and the exact √n term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputReport {
    pub bits_exact: f64,
    pub c_d: f64,
    /// √n cost coefficient as displayed in the throughput formula.
    pub c_c_paper: f64,
    /// √n cost coefficient from exact inversion of the decoding-error bound
    /// (the displayed coefficient divided by ln 2).
    pub c_c_exact: f64,
    /// `bits_exact - c_d`, the exact channel term.
    pub sqrt_n_term: f64,
}

/// Radiometer converse summary: Chebyshev false-alarm target, the resulting
/// threshold, the missed-detection bound, and Bob's converse error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverseReport {
    pub fa_ub: f64,
    pub md_ub: f64,
    pub threshold_t: f64,
    pub bob_error_lb: f64,
}

/// A probability bound together with clamping information, so vacuous
/// clamped bounds are distinguishable from tight ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdBound {
    /// Exact penultimate Chebyshev line, clamped to [0, 1].
    pub value: f64,
    /// The displayed simplification of the same bound.
    pub display: f64,
    pub clamped: bool,
}

/// Mean and variance of the squared magnitude of a heterodyne reading of the
/// channel output, given the input's photon-number mean and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeterodyneMoments {
    pub mean: f64,
    pub variance: f64,
    /// Simplified display form of the variance; its n̄ coefficient is low
    /// by 3γ² (it goes negative for a single photon at γ = 1), so
    /// `variance` carries the exact value that sampling reproduces.
    pub variance_display: f64,
}

/// Relative entropy (nats) between the two geometric laws Willie must
/// discriminate on the thermal channel: means `ηN_B` and `(1−η)n̄ + ηN_B`.
///
/// Evaluated as `(1+A)ln1p(u/(1+A)) − A·ln1p(u/A)` with `A = ηN_B`,
/// `u = (1−η)n̄`, switching to the power series in `u` when `u ≪ A` to keep
/// full relative precision through the leading-order cancellation.
pub fn qre_thermal_closed(nbar: f64, eta: f64, n_b: f64) -> Result<f64> {
    if n_b <= 0.0 {
        return Err(domain(
            "n_b",
            "pure-loss regime (n_b = 0): the thermal relative entropy diverges",
        ));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(domain("eta", "must lie in [0, 1)"));
    }
    if nbar < 0.0 {
        return Err(domain("nbar", "must be non-negative"));
    }
    let a = eta * n_b;
    let u = (1.0 - eta) * nbar;
    if u == 0.0 {
        return Ok(0.0);
    }
    if u < 0.25 * a {
        // D = Σ_{k≥2} (−1)^k u^k/k · (A^{1−k} − (1+A)^{1−k})
        let mut sum = 0.0;
        let mut u_pow = u * u;
        let mut sign = 1.0;
        let mut inv_a = 1.0 / a;
        let mut inv_a1 = 1.0 / (1.0 + a);
        for k in 2..400 {
            let term = sign * u_pow / k as f64 * (inv_a - inv_a1);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            u_pow *= u;
            sign = -sign;
            inv_a /= a;
            inv_a1 /= 1.0 + a;
        }
        Ok(sum)
    } else {
        Ok((1.0 + a) * (u / (1.0 + a)).ln_1p() - a * (u / a).ln_1p())
    }
}

/// Quadratic Taylor upper bound `(1−η)² n̄² / (2 ηN_B (1+ηN_B))` on
/// [`qre_thermal_closed`].
pub fn qre_thermal_taylor_ub(nbar: f64, eta: f64, n_b: f64) -> Result<f64> {
    if n_b <= 0.0 {
        return Err(domain("n_b", "pure-loss regime (n_b = 0)"));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(domain("eta", "must lie in [0, 1)"));
    }
    let a = eta * n_b;
    Ok((1.0 - eta).powi(2) * nbar * nbar / (2.0 * a * (1.0 + a)))
}

/// Photon budget `4ε√(ηN_B(1+ηN_B)) / (√n (1−η))` that pins Willie's error
/// at `½ − ε` on the thermal channel.
pub fn covert_nbar_thermal(epsilon: f64, eta: f64, n_b: f64, n: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        return Err(domain("eta", "must lie in [0, 1)"));
    }
    if n_b <= 0.0 {
        return Err(domain("n_b", "pure-loss regime (n_b = 0)"));
    }
    if !(0.0..0.5).contains(&epsilon) {
        return Err(domain("epsilon", "must lie in [0, 1/2)"));
    }
    if n < 1.0 {
        return Err(domain("n", "must be at least 1"));
    }
    let a = eta * n_b;
    Ok(4.0 * epsilon * (a * (1.0 + a)).sqrt() / (n.sqrt() * (1.0 - eta)))
}

/// Noise power `(2(1−η)N_B + 1)/(4η)` of the AWGN channel induced by Bob's
/// homodyne receiver.
pub fn homodyne_noise_power(eta: f64, n_b: f64) -> Result<f64> {
    if eta <= 0.0 || eta > 1.0 {
        return Err(domain("eta", "must lie in (0, 1]"));
    }
    Ok((2.0 * (1.0 - eta) * n_b + 1.0) / (4.0 * eta))
}

/// Decoding-error bound `2^{B − (n/2) log₂(1 + n̄/(2σ²))}` for a random
/// coherent codebook decoded by homodyne ML.
pub fn bob_error_ub_homodyne(bits: f64, n: f64, nbar: f64, sigma_sq: f64) -> f64 {
    (bits - (n / 2.0) * (1.0 + nbar / (2.0 * sigma_sq)).log2()).exp2()
}

/// Maximum covert bits over `n` uses at targets (ε, δ): exact inversion of
/// the homodyne error bound, with the cost decomposition.
pub fn bits_homodyne(
    n: f64,
    epsilon: f64,
    delta: f64,
    eta: f64,
    n_b: f64,
) -> Result<ThroughputReport> {
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(domain("delta", "must lie in (0, 1)"));
    }
    let nbar = covert_nbar_thermal(epsilon, eta, n_b, n)?;
    let sigma_sq = homodyne_noise_power(eta, n_b)?;
    let c_d = delta.log2();
    let sqrt_n_term = (n / 2.0) * (1.0 + nbar / (2.0 * sigma_sq)).log2();
    let a = eta * n_b;
    let c_c_paper = epsilon * (a * (1.0 + a)).sqrt() / (1.0 - eta) * 4.0 * eta
        / (2.0 * (1.0 - eta) * n_b + 1.0);
    Ok(ThroughputReport {
        bits_exact: c_d + sqrt_n_term,
        c_d,
        c_c_paper,
        c_c_exact: c_c_paper / LN_2,
        sqrt_n_term,
    })
}

/// Assembles the radiometer converse summary for a link at the given
/// false-alarm target: threshold, missed-detection bound at codeword mean
/// `nbar` (photon variance bounded by `var_ub`), and Bob's overall converse
/// error bound `κ·max(0, 1 − ...)` at rate `rate_bits`.
#[allow(clippy::too_many_arguments)]
pub fn converse_report(
    p_fa_target: f64,
    n: f64,
    gamma: f64,
    eta: f64,
    n_b: f64,
    nbar: f64,
    var_ub: f64,
    rate_bits: f64,
    kappa: f64,
) -> Result<ConverseReport> {
    let (d, t) = radiometer_threshold(p_fa_target, n, gamma, n_b);
    let md = radiometer_md_ub(nbar, var_ub, n, gamma, n_b, d);
    let bob_error_lb = kappa * bob_error_lb_converse(n, rate_bits, kappa, eta, nbar)?;
    Ok(ConverseReport {
        fa_ub: p_fa_target.min(1.0),
        md_ub: md.value,
        threshold_t: t,
        bob_error_lb,
    })
}

/// n̄ coefficient of the heterodyne `|y|²` variance: `γ[(1−γ)(1+2N_B) + 1]`.
fn heterodyne_c1_exact(gamma: f64, n_b: f64) -> f64 {
    gamma * ((1.0 - gamma) * (1.0 + 2.0 * n_b) + 1.0)
}

/// n̄ coefficient as displayed: `2γ[(2+N_B)(1−γ) − 1]`.
fn heterodyne_c1_display(gamma: f64, n_b: f64) -> f64 {
    2.0 * gamma * ((2.0 + n_b) * (1.0 - gamma) - 1.0)
}

fn heterodyne_c2(gamma: f64, n_b: f64) -> f64 {
    let base = 1.0 + (1.0 - gamma) * n_b;
    base * base
}

/// Moments of a squared heterodyne reading of the channel output, for an
/// input state with photon mean `nbar_i` and variance `var_i`.
pub fn heterodyne_moments(nbar_i: f64, var_i: f64, gamma: f64, n_b: f64) -> HeterodyneMoments {
    let mean = 1.0 + (1.0 - gamma) * n_b + gamma * nbar_i;
    let c2 = heterodyne_c2(gamma, n_b);
    HeterodyneMoments {
        mean,
        variance: gamma * gamma * var_i + heterodyne_c1_exact(gamma, n_b) * nbar_i + c2,
        variance_display: gamma * gamma * var_i + heterodyne_c1_display(gamma, n_b) * nbar_i + c2,
    }
}

/// Chebyshev radiometer threshold: `d = (1+(1−γ)N_B)/√P_FA*` and
/// `t = d/√n`, so the false-alarm rate is at most `P_FA*`.
pub fn radiometer_threshold(p_fa_target: f64, n: f64, gamma: f64, n_b: f64) -> (f64, f64) {
    let d = (1.0 + (1.0 - gamma) * n_b) / p_fa_target.sqrt();
    (d, d / n.sqrt())
}

/// Chebyshev bound on the radiometer's missed-detection probability for a
/// codeword with mean photon number `nbar_bar` and photon-number variance at
/// most `var_ub` per symbol. Vacuous (1) unless `γ√n·n̄ > d`.
pub fn radiometer_md_ub(
    nbar_bar: f64,
    var_ub: f64,
    n: f64,
    gamma: f64,
    n_b: f64,
    d: f64,
) -> MdBound {
    let margin = gamma * n.sqrt() * nbar_bar - d;
    let display_num = gamma * var_ub + heterodyne_c1_display(gamma, n_b) * nbar_bar;
    if margin <= 0.0 {
        return MdBound {
            value: 1.0,
            display: 1.0,
            clamped: true,
        };
    }
    let value = (gamma * gamma * var_ub
        + heterodyne_c1_exact(gamma, n_b) * nbar_bar
        + heterodyne_c2(gamma, n_b))
        / (margin * margin);
    let display = display_num / (margin * margin);
    MdBound {
        value: value.min(1.0),
        display: display.clamp(0.0, 1.0),
        clamped: value > 1.0,
    }
}

/// Holevo information `log₂(1+x) + x log₂(1+1/x)` (bits) of a circularly
/// symmetric coherent ensemble with mean received photon number `x`.
pub fn holevo_coherent(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (1.0 + x).log2() + x * (1.0 + 1.0 / x).log2()
}

/// Fano/Holevo converse on the error of the low-power codeword subset:
/// `max(0, 1 − [χ(ηn̄_U) + 1/n] / [log₂(κ)/n + R])`. The overall bound on
/// Bob's error is `κ` times the returned value.
pub fn bob_error_lb_converse(
    n: f64,
    rate_bits: f64,
    kappa: f64,
    eta: f64,
    nbar_u: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) || kappa == 0.0 {
        return Err(domain("kappa", "must lie in (0, 1]"));
    }
    if rate_bits <= 0.0 {
        return Err(domain("rate_bits", "must be positive"));
    }
    if nbar_u < 0.0 {
        return Err(domain("nbar_u", "must be non-negative"));
    }
    let denominator = kappa.log2() / n + rate_bits;
    if denominator <= 0.0 {
        return Err(domain(
            "rate_bits",
            "denominator log₂(κ)/n + R must be positive",
        ));
    }
    let numerator = holevo_coherent(eta * nbar_u) + 1.0 / n;
    Ok((1.0 - numerator / denominator).max(0.0))
}

/// Willie's exact error `½ Π ⟨0|ρ_i^W|0⟩` for an ideal vacuum-detecting
/// receiver on the pure-loss channel.
pub fn willie_pe_pureloss(vacuum_overlaps: &[f64]) -> f64 {
    0.5 * vacuum_overlaps.iter().product::<f64>()
}

/// Upper bound `½ e^{−γc}` on the same error, with `c = Σ(1 − |a₀⁽ⁱ⁾|²)`.
pub fn willie_pe_pureloss_ub(c: f64, gamma: f64) -> f64 {
    0.5 * (-gamma * c).exp()
}

/// Lower bound on Bob's error for two codewords constrained to vacuum
/// budgets `c_r`, `c_s`, as displayed in the pure-loss converse. The
/// `O(c²)` slack of the exponent is not added; the fidelity floor is clamped
/// at zero.
pub fn bob_error_lb_pureloss(c_r: f64, c_s: f64, prior_r: f64, prior_s: f64) -> Result<f64> {
    if c_r < 0.0 || c_s < 0.0 {
        return Err(domain("c", "vacuum budgets must be non-negative"));
    }
    if prior_r <= 0.0 || prior_s <= 0.0 {
        return Err(domain("prior", "priors must be positive"));
    }
    let total = prior_r + prior_s;
    let pr = prior_r / total;
    let ps = prior_s / total;
    let tr = (1.0 - (-c_r).exp()).sqrt();
    let ts = (1.0 - (-c_s).exp()).sqrt();
    let fidelity_floor = (1.0 - 0.25 * (tr + ts) * (tr + ts)).max(0.0);
    let radicand = 1.0 - 4.0 * pr * ps * fidelity_floor;
    if radicand < 0.0 {
        return Err(domain("priors", "radicand negative after fidelity floor"));
    }
    Ok(total / 2.0 * (1.0 - radicand.sqrt()))
}

/// Dark-count relative-entropy bound `(1−p_d)(q(1−η)|α|²)²/(2p_d)` (nats).
pub fn cre_darkcount_ub(q: f64, alpha_sq: f64, eta: f64, p_d: f64) -> Result<f64> {
    if p_d <= 0.0 || p_d >= 1.0 {
        return Err(domain("p_d", "must lie in (0, 1)"));
    }
    if !(0.0..=1.0).contains(&q) || q == 0.0 {
        return Err(domain("q", "must lie in (0, 1]"));
    }
    if alpha_sq < 0.0 {
        return Err(domain("alpha_sq", "must be non-negative"));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(domain("eta", "must lie in [0, 1)"));
    }
    let x = q * (1.0 - eta) * alpha_sq;
    Ok((1.0 - p_d) * x * x / (2.0 * p_d))
}

/// Photon budget `4ε/(√n(1−η)) · √(p_d/(1−p_d))` for the dark-count-limited
/// detector.
pub fn covert_nbar_darkcount(epsilon: f64, eta: f64, p_d: f64, n: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eta) {
        return Err(domain("eta", "must lie in [0, 1)"));
    }
    if p_d <= 0.0 || p_d >= 1.0 {
        return Err(domain("p_d", "must lie in (0, 1)"));
    }
    if !(0.0..0.5).contains(&epsilon) {
        return Err(domain("epsilon", "must lie in [0, 1/2)"));
    }
    if n < 1.0 {
        return Err(domain("n", "must be at least 1"));
    }
    Ok(4.0 * epsilon / (n.sqrt() * (1.0 - eta)) * (p_d / (1.0 - p_d)).sqrt())
}

/// On-slot amplitude `|α|² = 4εn/(τ√n(1−η)) √(p_d/(1−p_d))` of the
/// two-stage codebook with `τ` selected slots.
pub fn ook_twostage_alpha(n: f64, tau: f64, epsilon: f64, eta: f64, p_d: f64) -> Result<f64> {
    if tau < 1.0 || tau > n {
        return Err(domain("tau", "must lie in [1, n]"));
    }
    Ok(covert_nbar_darkcount(epsilon, eta, p_d, n)? * n / tau)
}

/// Gallager exponent `E₀(s)` of the binary asymmetric channel induced by
/// OOK with dark clicks at Bob. Identically zero at `s = 0`.
pub fn gallager_e0_bac(s: f64, q: f64, eta: f64, alpha_sq: f64, p_b: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let r = 1.0 / (1.0 + s);
    let on_no_click = (-eta * alpha_sq * r).exp();
    let first = (1.0 - p_b) * (1.0 - q * (1.0 - on_no_click)).powf(1.0 + s);
    let click_on = 1.0 - (1.0 - p_b) * (-eta * alpha_sq).exp();
    let second = ((1.0 - q) * p_b.powf(r) + q * click_on.powf(r)).powf(1.0 + s);
    -(first + second).ln()
}

/// Random-coding error bound `e^{−n(E₀(s) − sR)}`, clamped to [0, 1].
/// `rate_nats` is in nats per channel use.
pub fn bob_error_ub_ook(n: f64, rate_nats: f64, s: f64, e0: f64) -> f64 {
    (-n * (e0 - s * rate_nats)).exp().min(1.0)
}

/// Maximizes `E₀(s) − sR` over `s ∈ [0, 1]` on a grid of step 1e-3.
/// Returns the best `(s, E₀(s))`.
pub fn gallager_optimize_s(
    rate_nats: f64,
    q: f64,
    eta: f64,
    alpha_sq: f64,
    p_b: f64,
) -> (f64, f64) {
    let mut best = (0.0, 0.0);
    let mut best_exponent = 0.0;
    for i in 0..=1000 {
        let s = i as f64 * 1e-3;
        let e0 = gallager_e0_bac(s, q, eta, alpha_sq, p_b);
        let exponent = e0 - s * rate_nats;
        if exponent > best_exponent {
            best_exponent = exponent;
            best = (s, e0);
        }
    }
    best
}
