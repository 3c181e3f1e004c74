//! High-precision reference evaluations used to cross-check the closed
//! forms. The worst grid corners put the thermal relative entropy near
//! 1e-13 nats, far below what a straightforward f64 summation can resolve
//! relative to its own intermediates, so the brute-force diagonal sum runs
//! in 256-bit arithmetic.

use astro_float::{BigFloat, Consts, RoundingMode};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::None;

fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

fn to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().unwrap_or(f64::NAN)
}

/// Brute-force relative entropy (nats) between the truncated geometric
/// photon-number laws with means `ηN_B` and `(1−η)n̄ + ηN_B`, summed term
/// by term at 256-bit precision over `0..=cutoff`.
pub fn qre_thermal_diagonal(nbar: f64, eta: f64, n_b: f64, cutoff: usize) -> f64 {
    assert!(eta > 0.0 && eta < 1.0 && n_b > 0.0 && nbar >= 0.0);
    if nbar == 0.0 {
        return 0.0;
    }
    let mut cc = Consts::new().expect("constants cache");
    let one = bf(1.0);
    let a = bf(eta).mul(&bf(n_b), PREC, RM);
    let u = one.sub(&bf(eta), PREC, RM).mul(&bf(nbar), PREC, RM);
    let b = a.add(&u, PREC, RM);
    let one_a = one.add(&a, PREC, RM);
    let one_b = one.add(&b, PREC, RM);
    // ln(p_k/q_k) = k·ln(A/B) + (k+1)·ln((1+B)/(1+A))
    let ln_ab = a.div(&b, PREC, RM).ln(PREC, RM, &mut cc);
    let ln_noise = one_b.div(&one_a, PREC, RM).ln(PREC, RM, &mut cc);
    let ratio = a.div(&one_a, PREC, RM);
    let mut p = one.div(&one_a, PREC, RM);
    let mut sum = bf(0.0);
    for k in 0..=cutoff {
        let kf = bf(k as f64);
        let log_term = kf.mul(&ln_ab, PREC, RM).add(
            &kf.add(&one, PREC, RM).mul(&ln_noise, PREC, RM),
            PREC,
            RM,
        );
        sum = sum.add(&p.mul(&log_term, PREC, RM), PREC, RM);
        p = p.mul(&ratio, PREC, RM);
    }
    to_f64(&sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds;
    use crate::fock;
    use approx::assert_relative_eq;

    #[test]
    fn agrees_with_f64_sum_where_f64_is_adequate() {
        // A = 0.5 vs B = 0.55: the divergence is ~1.5e-3, comfortably
        // resolvable in f64.
        let p = fock::thermal_diagonal(0.5, 300);
        let q = fock::thermal_diagonal(0.55, 300);
        let f64_sum = crate::metrics::qre_diagonal(&p, &q).unwrap();
        let hp = qre_thermal_diagonal(0.1, 0.5, 1.0, 300);
        assert_relative_eq!(f64_sum, hp, max_relative = 1e-10);
    }

    #[test]
    fn agrees_with_closed_form_at_extreme_corner() {
        // The cancellation-heavy corner of the grid.
        let cutoff = fock::thermal_cutoff_for_tail(0.9 * 10.0, 1e-30);
        let hp = qre_thermal_diagonal(1e-4, 0.9, 10.0, cutoff);
        let closed = bounds::qre_thermal_closed(1e-4, 0.9, 10.0).unwrap();
        assert_relative_eq!(hp, closed, max_relative = 1e-10);
        assert!(hp < 1e-12, "corner value {hp}");
    }
}
