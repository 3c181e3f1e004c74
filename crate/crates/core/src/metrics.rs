//! Distinguishability and information measures shared by the achievability
//! and converse arguments.
//!
//! All relative entropies are in nats; use [`nats_to_bits`] where a rate
//! formula needs log₂.

use crate::fock::{DensityOperator, FockVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },
    #[error("support violation: p[{index}] = {p:.3e} where q[{index}] = 0")]
    SupportViolation { index: usize, p: f64 },
    #[error("domain error: {0}")]
    Domain(&'static str),
}

pub type Result<T> = std::result::Result<T, MetricError>;

/// Tag for the argument that produced a binary-test error lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    PinskerQuantum,
    PinskerClassical,
    HelstromExact,
}

/// Lower bound on the average error of an equal-prior binary test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryTestBound {
    pub lower: f64,
    pub kind: BoundKind,
}

pub const LN_2: f64 = std::f64::consts::LN_2;

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / LN_2
}

fn check_cutoffs(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(MetricError::CutoffMismatch { left: a, right: b });
    }
    Ok(())
}

/// Trace distance `½‖ρ−σ‖₁`, via the eigenvalues of the Hermitian
/// difference.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_cutoffs(rho.cutoff(), sigma.cutoff())?;
    let diff = rho.matrix() - sigma.matrix();
    let eigenvalues = diff.symmetric_eigen().eigenvalues;
    Ok(0.5 * eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

/// `|⟨ψ|φ⟩|²`.
pub fn fidelity_pure(psi: &FockVector, phi: &FockVector) -> Result<f64> {
    check_cutoffs(psi.cutoff(), phi.cutoff())?;
    let overlap: num_complex::Complex64 = psi
        .amplitudes()
        .iter()
        .zip(phi.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(overlap.norm_sqr())
}

/// Relative entropy `Σ p_k ln(p_k/q_k)` (nats) between two distributions
/// given as probability sequences, with the convention `0·ln(0/·) = 0`.
///
/// Sequences must be normalized to 1 within 1e-8. Mass on a point where `q`
/// vanishes signals an infinite divergence and is reported as
/// [`MetricError::SupportViolation`].
pub fn qre_diagonal(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(MetricError::CutoffMismatch {
            left: p.len().saturating_sub(1),
            right: q.len().saturating_sub(1),
        });
    }
    for (sum, name) in [(p.iter().sum::<f64>(), "p"), (q.iter().sum::<f64>(), "q")] {
        if (sum - 1.0).abs() > 1e-8 {
            let _ = name;
            return Err(MetricError::Domain("sequence not normalized to 1 ± 1e-8"));
        }
    }
    let mut acc = 0.0;
    let mut comp = 0.0; // Neumaier compensation
    for (index, (&pk, &qk)) in p.iter().zip(q).enumerate() {
        if pk <= 1e-15 {
            continue;
        }
        if qk == 0.0 {
            return Err(MetricError::SupportViolation { index, p: pk });
        }
        let term = pk * (pk / qk).ln();
        let t = acc + term;
        comp += if acc.abs() >= term.abs() {
            (acc - t) + term
        } else {
            (term - t) + acc
        };
        acc = t;
    }
    Ok(acc + comp)
}

/// Helstrom error for discriminating two pure states of fidelity `F` with
/// the given (unnormalized) priors: `½(1 − √(1 − 4 p̃_r p̃_s F))`.
pub fn helstrom_pure(fidelity: f64, prior_r: f64, prior_s: f64) -> f64 {
    let total = prior_r + prior_s;
    let pr = prior_r / total;
    let ps = prior_s / total;
    0.5 * (1.0 - (1.0 - 4.0 * pr * ps * fidelity).max(0.0).sqrt())
}

/// Minimum equal-prior error for discriminating two mixed states:
/// `½(1 − trace_distance)`.
pub fn helstrom_exact(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<f64> {
    Ok(0.5 * (1.0 - trace_distance(rho0, rho1)?))
}

/// [`helstrom_exact`] packaged as a [`BinaryTestBound`]; unlike the Pinsker
/// bounds it is tight and may reach ½ exactly.
pub fn helstrom_exact_bound(
    rho0: &DensityOperator,
    rho1: &DensityOperator,
) -> Result<BinaryTestBound> {
    Ok(BinaryTestBound {
        lower: helstrom_exact(rho0, rho1)?,
        kind: BoundKind::HelstromExact,
    })
}

/// Quantum Pinsker lower bound `max(0, ½ − √(D/8))` on the equal-prior test
/// error, with `D` the total (already n-multiplied) relative entropy.
pub fn pinsker_quantum_lb(qre_total: f64) -> BinaryTestBound {
    BinaryTestBound {
        lower: (0.5 - (qre_total / 8.0).sqrt()).max(0.0),
        kind: BoundKind::PinskerQuantum,
    }
}

/// Bernoulli relative entropy `p0 ln(p0/p1) + (1−p0) ln((1−p0)/(1−p1))` in
/// nats. Endpoints are rejected: they make the divergence infinite except in
/// the trivial `p0 = p1` case.
pub fn cre_bernoulli(p0: f64, p1: f64) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0) {
        return Err(MetricError::Domain("probabilities must lie in (0, 1)"));
    }
    Ok(p0 * (p0 / p1).ln() + (1.0 - p0) * ((1.0 - p0) / (1.0 - p1)).ln())
}

/// Classical Pinsker lower bound; same form as [`pinsker_quantum_lb`].
pub fn pinsker_classical_lb(cre_total: f64) -> BinaryTestBound {
    BinaryTestBound {
        lower: (0.5 - (cre_total / 8.0).sqrt()).max(0.0),
        kind: BoundKind::PinskerClassical,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use crate::fock::{self, thermal_state, DensityOperator, FockVector};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_complex::Complex64;

    fn vacuum_op(cutoff: usize) -> DensityOperator {
        DensityOperator::from_pure(&FockVector::number_state(0, cutoff).unwrap())
    }

    #[test]
    fn trace_distance_basics() {
        let th = thermal_state(0.5, 60).unwrap();
        assert_abs_diff_eq!(trace_distance(&th, &th).unwrap(), 0.0, epsilon = 1e-12);

        let zero = DensityOperator::from_pure(&FockVector::number_state(0, 1).unwrap());
        let one = DensityOperator::from_pure(&FockVector::number_state(1, 1).unwrap());
        assert_abs_diff_eq!(trace_distance(&zero, &one).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_distance_vacuum_thermal_half() {
        // Geometric closed form: ½(½ + Σ_{k≥1} 2^{-(k+1)}) = ½.
        let th = thermal_state(1.0, 60).unwrap();
        let vac = vacuum_op(60);
        assert_relative_eq!(
            trace_distance(&vac, &th).unwrap(),
            0.5,
            max_relative = 1e-10
        );
    }

    #[test]
    fn trace_distance_cutoff_mismatch() {
        let a = vacuum_op(3);
        let b = vacuum_op(4);
        assert!(matches!(
            trace_distance(&a, &b),
            Err(MetricError::CutoffMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_examples() {
        let vac = FockVector::number_state(0, 20).unwrap();
        let one = FockVector::number_state(1, 20).unwrap();
        assert_eq!(fidelity_pure(&vac, &vac).unwrap(), 1.0);
        assert_eq!(fidelity_pure(&vac, &one).unwrap(), 0.0);
        let coh = fock::coherent_state(Complex64::new(1.0, 0.0), 20).unwrap();
        assert_relative_eq!(
            fidelity_pure(&vac, &coh).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn fidelity_trace_distance_pure_state_identity() {
        let psi = FockVector::from_amplitudes(vec![
            Complex64::new(0.6, 0.1),
            Complex64::new(0.0, -0.3),
            Complex64::new(0.7, 0.0),
        ])
        .unwrap();
        let phi = FockVector::from_amplitudes(vec![
            Complex64::new(0.2, 0.0),
            Complex64::new(0.5, 0.4),
            Complex64::new(-0.1, 0.6),
        ])
        .unwrap();
        let f = fidelity_pure(&psi, &phi).unwrap();
        let t = trace_distance(
            &DensityOperator::from_pure(&psi),
            &DensityOperator::from_pure(&phi),
        )
        .unwrap();
        assert_abs_diff_eq!(f, 1.0 - t * t, epsilon = 1e-10);
    }

    #[test]
    fn qre_diagonal_zero_on_identical() {
        let p = fock::thermal_diagonal(0.7, 200);
        assert_eq!(qre_diagonal(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn qre_diagonal_matches_thermal_closed_form() {
        // ηN_B = 0.5 vs 0.55, i.e. (1−η)n̄ = 0.05.
        let p = fock::thermal_diagonal(0.5, 200);
        let q = fock::thermal_diagonal(0.55, 200);
        let sum = qre_diagonal(&p, &q).unwrap();
        let closed = bounds::qre_thermal_closed(0.1, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(sum, closed, epsilon = 1e-9);
    }

    #[test]
    fn qre_diagonal_support_violation() {
        assert!(matches!(
            qre_diagonal(&[1.0, 0.0], &[0.0, 1.0]),
            Err(MetricError::SupportViolation { index: 0, .. })
        ));
    }

    #[test]
    fn qre_diagonal_rejects_unnormalized() {
        assert!(matches!(
            qre_diagonal(&[0.7, 0.2], &[0.5, 0.5]),
            Err(MetricError::Domain(_))
        ));
    }

    #[test]
    fn helstrom_pure_examples() {
        assert_eq!(helstrom_pure(0.0, 0.5, 0.5), 0.0);
        assert_eq!(helstrom_pure(1.0, 0.5, 0.5), 0.5);
        assert_abs_diff_eq!(helstrom_pure(0.64, 0.5, 0.5), 0.2, epsilon = 1e-15);
        // Unnormalized priors are normalized internally.
        assert_abs_diff_eq!(
            helstrom_pure(0.64, 2.0, 2.0),
            helstrom_pure(0.64, 0.5, 0.5),
            epsilon = 1e-15
        );
    }

    #[test]
    fn helstrom_exact_examples() {
        let th = thermal_state(1.0, 60).unwrap();
        assert_abs_diff_eq!(helstrom_exact(&th, &th).unwrap(), 0.5, epsilon = 1e-12);

        let zero = DensityOperator::from_pure(&FockVector::number_state(0, 1).unwrap());
        let one = DensityOperator::from_pure(&FockVector::number_state(1, 1).unwrap());
        assert_abs_diff_eq!(helstrom_exact(&zero, &one).unwrap(), 0.0, epsilon = 1e-12);

        let vac = vacuum_op(60);
        assert_relative_eq!(
            helstrom_exact(&vac, &th).unwrap(),
            0.25,
            max_relative = 1e-9
        );
    }

    #[test]
    fn pinsker_bounds() {
        assert_eq!(pinsker_quantum_lb(0.0).lower, 0.5);
        assert_abs_diff_eq!(pinsker_quantum_lb(0.02).lower, 0.45, epsilon = 1e-15);
        assert_eq!(pinsker_quantum_lb(2.0).lower, 0.0);
        assert_eq!(pinsker_quantum_lb(0.0).kind, BoundKind::PinskerQuantum);

        assert_eq!(pinsker_classical_lb(0.0).lower, 0.5);
        assert_abs_diff_eq!(pinsker_classical_lb(0.02).lower, 0.45, epsilon = 1e-15);
        assert_eq!(pinsker_classical_lb(2.0).lower, 0.0);
        assert_eq!(pinsker_classical_lb(0.0).kind, BoundKind::PinskerClassical);
    }

    #[test]
    fn cre_bernoulli_examples() {
        assert_abs_diff_eq!(cre_bernoulli(0.3, 0.3).unwrap(), 0.0, epsilon = 1e-16);
        assert!(cre_bernoulli(0.0, 0.5).is_err());
        assert!(cre_bernoulli(0.5, 1.0).is_err());

        // The dark-count bound dominates the exact Bernoulli divergence.
        let p0 = 1e-3;
        let p1 = bounds_p1(1.0, 8.0042e-4, 0.5, p0);
        let cre = cre_bernoulli(p0, p1).unwrap();
        let ub = bounds::cre_darkcount_ub(1.0, 8.0042e-4, 0.5, p0).unwrap();
        assert!(cre <= ub);
        assert!(cre > 0.0);
    }

    fn bounds_p1(q: f64, alpha_sq: f64, eta: f64, p_d: f64) -> f64 {
        p_d + q * (1.0 - p_d) * (1.0 - (-(1.0 - eta) * alpha_sq).exp())
    }

    #[test]
    fn nats_bits_conversion() {
        assert_abs_diff_eq!(nats_to_bits(LN_2), 1.0, epsilon = 1e-15);
    }
}
