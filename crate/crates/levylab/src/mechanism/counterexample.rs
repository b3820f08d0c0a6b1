//! Atom-series mechanisms whose gauge violates the doubling condition.
//!
//! The construction concentrates the jump measure on a lacunary sequence
//! r_n → 0 with weights tuned so that ψ oscillates between two power-law
//! envelopes: along the subsequence λ_n = 1/r_n the mechanism looks
//! γ-stable, while between atoms it degrades toward linear growth. The
//! resulting gauge has lim sup g(2r)/g(r) = ∞ in theory; at desk scale the
//! ratios along r_n already blow well past the stable limit 2^{γ/(γ−1)}.
//!
//! Both families are far outside f64 range (weights reach e^{+O(n²)}),
//! which is why atoms carry logs.

use super::{Atom, BranchingMechanism, LevyMeasure};
use crate::error::{LabError, Result};

/// Builds the doubling-violating mechanism with target lower exponent γ.
///
/// * γ ∈ (1, 2): atoms at r_n = e^{−n log n} with mass r_n^{−γ}, n ≥ 3.
/// * γ = 2: atoms at r_n = e^{−n²} with mass r_n^{−2} e^{−n log n}, n ≥ 2
///   (the extra decay keeps ∫ r² π(dr) summable at the boundary index).
///
/// `n_max` is the last atom index; at least 5 so the lacunary pattern has
/// room to express itself.
pub fn build_counterexample(gamma: f64, n_max: u32) -> Result<BranchingMechanism> {
    if !(gamma > 1.0 && gamma <= 2.0) {
        return Err(LabError::Domain(format!(
            "counterexample index must lie in (1, 2], got {gamma}"
        )));
    }
    if n_max < 5 {
        return Err(LabError::Domain(format!("need n_max ≥ 5, got {n_max}")));
    }
    let first = if gamma == 2.0 { 2 } else { 3 };
    let atoms: Vec<Atom> = (first..=n_max)
        .map(|n| {
            let nf = n as f64;
            if gamma == 2.0 {
                Atom { log_r: -nf * nf, log_weight: 2.0 * nf * nf - nf * nf.ln() }
            } else {
                let theta = nf * nf.ln();
                Atom { log_r: -theta, log_weight: gamma * theta }
            }
        })
        .collect();
    BranchingMechanism::new(0.0, 0.0, LevyMeasure::AtomList { atoms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn atoms(m: &BranchingMechanism) -> &[Atom] {
        match &m.measure {
            LevyMeasure::AtomList { atoms } => atoms,
            _ => panic!("expected an atom list"),
        }
    }

    #[test]
    fn first_atoms_match_the_construction() {
        let m = build_counterexample(1.5, 12).unwrap();
        let a = atoms(&m);
        assert_eq!(a.len(), 10);
        assert_relative_eq!(a[0].log_r, -3.0 * 3.0f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(a[0].log_weight, 1.5 * 3.0 * 3.0f64.ln(), max_relative = 1e-15);

        let b = build_counterexample(2.0, 12).unwrap();
        let a = atoms(&b);
        assert_eq!(a.len(), 11);
        assert_relative_eq!(a[0].log_r, -4.0, max_relative = 1e-15);
        assert_relative_eq!(a[0].log_weight, 8.0 - 2.0 * 2.0f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn second_moment_terms_decay() {
        // w_n r_n² must be summable: terms are e^{(γ−2) θ_n} for γ < 2
        // and e^{−n log n} at γ = 2 — strictly decreasing either way.
        for &g in &[1.3, 1.5, 2.0] {
            let m = build_counterexample(g, 30).unwrap();
            let terms: Vec<f64> = atoms(&m)
                .iter()
                .map(|a| a.log_weight + 2.0 * a.log_r)
                .collect();
            for w in terms.windows(2) {
                assert!(w[1] < w[0], "second-moment term grew: {:?}", w);
            }
            assert!(*terms.last().unwrap() < terms[0]);
        }
    }

    #[test]
    fn psi_interpolates_the_target_power_at_atom_scales() {
        // At λ_n = 1/r_n the sum is dominated by the n-th atom's
        // compensated term: log ψ ≈ γ θ_n + log h(1) up to neighbours.
        let m = build_counterexample(1.5, 40).unwrap();
        let theta = 10.0 * 10.0f64.ln();
        let lp = m.log_psi(theta);
        let h1 = (std::f64::consts::E.recip() - 1.0f64 + 1.0).ln();
        assert!((lp - (1.5 * theta + h1)).abs() < 0.7, "log ψ = {lp}");
    }

    #[test]
    fn construction_guards() {
        assert!(build_counterexample(1.0, 20).is_err());
        assert!(build_counterexample(2.2, 20).is_err());
        assert!(build_counterexample(1.5, 4).is_err());
    }
}
