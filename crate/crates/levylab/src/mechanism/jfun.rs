//! The truncated-mean function of the jump part of ψ′, and the two-sided
//! bound it gives on ψ′ − α.
//!
//! For an atomic measure the subordinator ψ′(λ) − α − 2βλ has Lévy
//! measure ν = Σ w_n r_n δ_{r_n}, and
//!
//!     J(x) = ∫ min(r, x) ν(dr) = Σ w_n r_n min(r_n, x)
//!
//! controls the exponent through (1 − e⁻¹) λ J(1/λ) ≤ ψ′(λ) − α ≤ λ J(1/λ)
//! when β = 0 — the elementary sandwich 1 − e^{−y} ≍ min(y, 1).

use super::{BranchingMechanism, LevyMeasure};
use crate::error::{LabError, Result};
use crate::num::logsumexp;

/// log J(x) for an atomic mechanism with β = 0, given log x.
pub fn log_jump_j(mech: &BranchingMechanism, log_x: f64) -> Result<f64> {
    if mech.beta != 0.0 {
        return Err(LabError::Domain(
            "J is defined for mechanisms without a Brownian part".into(),
        ));
    }
    let atoms = match &mech.measure {
        LevyMeasure::AtomList { atoms } => atoms,
        _ => {
            return Err(LabError::Domain(
                "J is defined for atomic jump measures".into(),
            ))
        }
    };
    if atoms.is_empty() {
        return Err(LabError::Domain("J of an empty atom list".into()));
    }
    let terms: Vec<f64> = atoms
        .iter()
        .map(|a| a.log_weight + a.log_r + a.log_r.min(log_x))
        .collect();
    Ok(logsumexp(&terms))
}

#[cfg(test)]
mod tests {
    use super::super::build_counterexample;
    use super::*;
    use crate::mechanism::Atom;
    use approx::assert_relative_eq;

    #[test]
    fn two_atom_hand_computation() {
        // Atoms: (r = e⁻¹, w = e²) and (r = e⁻³, w = e⁵).
        let atoms = vec![
            Atom { log_r: -1.0, log_weight: 2.0 },
            Atom { log_r: -3.0, log_weight: 5.0 },
        ];
        let m = BranchingMechanism::new(0.0, 0.0, LevyMeasure::AtomList { atoms }).unwrap();
        // x between the atoms (log x = −2): J = w₁r₁·x + w₂r₂·r₂.
        let want = ((2.0f64 - 1.0 - 2.0).exp() + (5.0f64 - 3.0 - 3.0).exp()).ln();
        assert_relative_eq!(log_jump_j(&m, -2.0).unwrap(), want, max_relative = 1e-13);
        // x above both: J = Σ w r².
        let want_hi = ((2.0f64 - 2.0).exp() + (5.0f64 - 6.0).exp()).ln();
        assert_relative_eq!(log_jump_j(&m, 0.5).unwrap(), want_hi, max_relative = 1e-13);
    }

    #[test]
    fn sandwich_bounds_on_the_exponent() {
        // (1 − e⁻¹) λ J(1/λ) ≤ ψ′(λ) ≤ λ J(1/λ) for a driftless atomic
        // mechanism, across log λ from deep underflow to deep overflow.
        let k1 = (1.0 - std::f64::consts::E.recip()).ln();
        for &g in &[1.5, 2.0] {
            let m = build_counterexample(g, 25).unwrap();
            for &lx in &[-200.0, -50.0, -5.0, 0.0, 5.0, 50.0, 200.0, 2000.0] {
                let mid = m.log_psi_prime(lx);
                let lj = lx + log_jump_j(&m, -lx).unwrap();
                assert!(k1 + lj <= mid + 1e-12, "lower bound failed at lx = {lx}");
                assert!(mid <= lj + 1e-12, "upper bound failed at lx = {lx}");
            }
        }
    }

    #[test]
    fn rejects_unsupported_mechanisms() {
        let m = BranchingMechanism::stable(1.5).unwrap();
        assert!(log_jump_j(&m, 0.0).is_err());
        let b = BranchingMechanism::new(
            0.0,
            1.0,
            LevyMeasure::AtomList { atoms: vec![Atom { log_r: -1.0, log_weight: 0.0 }] },
        )
        .unwrap();
        assert!(log_jump_j(&b, 0.0).is_err());
    }
}
