//! Branching mechanisms ψ(λ) = αλ + βλ² + ∫(e^{−λr} − 1 + λr) π(dr) and
//! everything derived from them: inverses, the subordinator exponent
//! φ = ψ′∘ψ⁻¹, the gauge function g, scaling-exponent estimators, and the
//! atom-series mechanisms whose gauge fails the doubling condition.
//!
//! All series arithmetic is carried in log-domain: the atom-series
//! mechanisms place weights e^{+O(n²)} at positions e^{−O(n²)}, far outside
//! f64 range, and the gauge must be evaluable at r = e^{−10⁶}.

mod counterexample;
mod exponents;
mod gauge;
mod invert;
mod jfun;
mod psi;

pub use counterexample::build_counterexample;
pub use exponents::{estimate_exponents, ExponentReport};
pub use gauge::{doubling_report, DoublingReport, GaugeFunction};
pub use invert::{phi_inv_log, phi_log, psi_inv, psi_inv_log, solve_u, solve_v, tail_integral};
pub use jfun::log_jump_j;

use crate::error::{LabError, Result};

/// One atom of a purely atomic Lévy measure, stored in log-domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// log of the atom position r > 0.
    pub log_r: f64,
    /// log of the atom mass π({r}) > 0.
    pub log_weight: f64,
}

/// The jump part π of a branching mechanism.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyMeasure {
    /// The stable family: the measure whose compensated integral equals
    /// λ^γ exactly, i.e. π(dr) = [γ(γ−1)/Γ(2−γ)] r^{−1−γ} dr for γ ∈ (1,2),
    /// degenerating to the pure-Brownian λ² as γ → 2. Evaluated in closed
    /// form throughout.
    StableTail { gamma: f64 },
    /// A finite list of atoms; positions and weights kept as logs.
    AtomList { atoms: Vec<Atom> },
    /// No jump part.
    Null,
}

/// A branching mechanism: drift α ≥ 0, Brownian coefficient β ≥ 0, and a
/// jump measure with finite ∫ r² π(dr) near 0 (automatic for both supported
/// kinds).
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingMechanism {
    pub alpha: f64,
    pub beta: f64,
    pub measure: LevyMeasure,
}

impl BranchingMechanism {
    pub fn new(alpha: f64, beta: f64, measure: LevyMeasure) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(LabError::Domain(format!("alpha must be ≥ 0, got {alpha}")));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(LabError::Domain(format!("beta must be ≥ 0, got {beta}")));
        }
        match &measure {
            LevyMeasure::StableTail { gamma } => {
                if !(*gamma > 1.0 && *gamma <= 2.0) {
                    return Err(LabError::Domain(format!(
                        "stable index must lie in (1, 2], got {gamma}"
                    )));
                }
            }
            LevyMeasure::AtomList { atoms } => {
                if atoms.iter().any(|a| !a.log_r.is_finite() || !a.log_weight.is_finite()) {
                    return Err(LabError::Domain("atom logs must be finite".into()));
                }
            }
            LevyMeasure::Null => {
                if alpha == 0.0 && beta == 0.0 {
                    return Err(LabError::Domain("mechanism is identically zero".into()));
                }
            }
        }
        Ok(Self { alpha, beta, measure })
    }

    /// The pure stable mechanism ψ(λ) = λ^γ, γ ∈ (1, 2].
    pub fn stable(gamma: f64) -> Result<Self> {
        Self::new(0.0, 0.0, LevyMeasure::StableTail { gamma })
    }

    /// True when the jump part is the stable family (including γ = 2).
    pub fn stable_index(&self) -> Option<f64> {
        match self.measure {
            LevyMeasure::StableTail { gamma } => Some(gamma),
            _ => None,
        }
    }

    /// Whether ∫^∞ du/ψ(u) converges, decided structurally: ψ grows
    /// superlinearly iff β > 0 or the jump part is stable with γ > 1; a
    /// finite atom list contributes an asymptotically *linear* term only.
    pub fn extinction_holds(&self) -> bool {
        if self.beta > 0.0 {
            return true;
        }
        matches!(self.measure, LevyMeasure::StableTail { .. })
    }

    /// log ψ′(∞) for mechanisms whose derivative saturates (finite atom
    /// lists with β = 0); `None` when ψ′ is unbounded.
    pub fn log_psi_prime_sup(&self) -> Option<f64> {
        if self.beta > 0.0 {
            return None;
        }
        match &self.measure {
            LevyMeasure::StableTail { .. } => None,
            LevyMeasure::Null => Some(self.alpha.ln()),
            LevyMeasure::AtomList { atoms } => {
                let terms: Vec<f64> =
                    atoms.iter().map(|a| a.log_weight + a.log_r).collect();
                let jump_sup = crate::num::logsumexp(&terms);
                if self.alpha > 0.0 {
                    Some(crate::num::logsumexp(&[self.alpha.ln(), jump_sup]))
                } else {
                    Some(jump_sup)
                }
            }
        }
    }
}
