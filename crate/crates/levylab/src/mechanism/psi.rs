//! Log-domain evaluation of ψ, ψ′ and ψ̃ = ψ/λ.
//!
//! ψ′ is assembled term by term from the differentiated integrand
//! ∫ (1 − e^{−λr}) r π(dr) — never by finite differences, which lose all
//! precision on the wildly curved atom-series mechanisms.

use super::{BranchingMechanism, LevyMeasure};
use crate::num::{log1mexp_of_log, logh_of_log, logsumexp};

impl BranchingMechanism {
    /// log ψ(e^{lx}), valid for any finite lx.
    pub fn log_psi(&self, lx: f64) -> f64 {
        let mut terms: Vec<f64> = Vec::with_capacity(4);
        if self.alpha > 0.0 {
            terms.push(self.alpha.ln() + lx);
        }
        if self.beta > 0.0 {
            terms.push(self.beta.ln() + 2.0 * lx);
        }
        match &self.measure {
            LevyMeasure::StableTail { gamma } => terms.push(gamma * lx),
            LevyMeasure::AtomList { atoms } => {
                // e^{−λr} − 1 + λr = h(λr) with h(x) = e^{−x} − 1 + x.
                for a in atoms {
                    terms.push(a.log_weight + logh_of_log(lx + a.log_r));
                }
            }
            LevyMeasure::Null => {}
        }
        logsumexp(&terms)
    }

    /// log ψ′(e^{lx}), assembled term-wise:
    /// ψ′(λ) = α + 2βλ + ∫ (1 − e^{−λr}) r π(dr).
    pub fn log_psi_prime(&self, lx: f64) -> f64 {
        let mut terms: Vec<f64> = Vec::with_capacity(4);
        if self.alpha > 0.0 {
            terms.push(self.alpha.ln());
        }
        if self.beta > 0.0 {
            terms.push((2.0 * self.beta).ln() + lx);
        }
        match &self.measure {
            LevyMeasure::StableTail { gamma } => terms.push(gamma.ln() + (gamma - 1.0) * lx),
            LevyMeasure::AtomList { atoms } => {
                for a in atoms {
                    terms.push(a.log_weight + a.log_r + log1mexp_of_log(lx + a.log_r));
                }
            }
            LevyMeasure::Null => {}
        }
        logsumexp(&terms)
    }

    /// ψ(λ) in plain domain; overflows to ∞ where it must.
    pub fn psi(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return 0.0;
        }
        self.log_psi(lambda.ln()).exp()
    }

    /// ψ′(λ) in plain domain. ψ′(0) = α.
    pub fn psi_prime(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return self.alpha;
        }
        self.log_psi_prime(lambda.ln()).exp()
    }

    /// ψ̃(λ) = ψ(λ)/λ, with ψ̃(0) = α.
    pub fn psi_tilde(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return self.alpha;
        }
        let lx = lambda.ln();
        (self.log_psi(lx) - lx).exp()
    }
}
