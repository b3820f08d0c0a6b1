//! The gauge function g(r) = log log(1/r) / φ⁻¹((1/r) log log(1/r)) and
//! its doubling behaviour g(2r)/g(r).
//!
//! g is only defined on (0, r₀) with r₀ = min(e^{−e}, 1/α): below e^{−e}
//! the iterated logarithm exceeds 1, and for saturating mechanisms the
//! φ⁻¹ argument must also stay below ψ′(∞). Out-of-domain scales are
//! reported, not silently clamped — a clamped φ⁻¹ would fabricate
//! doubling ratios of exactly 1.

use super::invert::phi_inv_log;
use super::BranchingMechanism;
use crate::error::{LabError, Result};
use crate::num::loglog_from_log;

/// Evaluator for the gauge of one mechanism.
#[derive(Debug, Clone)]
pub struct GaugeFunction {
    mech: BranchingMechanism,
    log_r0: f64,
}

impl GaugeFunction {
    pub fn new(mech: BranchingMechanism) -> Self {
        let mut log_r0 = -std::f64::consts::E;
        if mech.alpha > 0.0 {
            log_r0 = log_r0.min(-mech.alpha.ln());
        }
        Self { mech, log_r0 }
    }

    pub fn mechanism(&self) -> &BranchingMechanism {
        &self.mech
    }

    /// Upper end of the domain: g lives on (0, r₀).
    pub fn r0(&self) -> f64 {
        self.log_r0.exp()
    }

    pub fn log_r0(&self) -> f64 {
        self.log_r0
    }

    /// log g(r) given log r. Errors when r ≥ r₀ or when the φ⁻¹ argument
    /// escapes the range of ψ′.
    pub fn eval_log(&self, log_r: f64) -> Result<f64> {
        if !(log_r < self.log_r0) {
            return Err(LabError::Domain(format!(
                "gauge needs log r < {:.6}, got {log_r:.6}",
                self.log_r0
            )));
        }
        let ll = loglog_from_log(log_r);
        let log_y = -log_r + ll.ln();
        Ok(ll.ln() - phi_inv_log(&self.mech, log_y)?)
    }

    /// g(r) in plain domain; underflows to 0 for very small r, use
    /// `eval_log` when the value itself is needed at extreme scales.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(LabError::Domain(format!("gauge needs r > 0, got {r}")));
        }
        Ok(self.eval_log(r.ln())?.exp())
    }
}

/// Doubling ratios g(2r)/g(r) along a list of scales.
#[derive(Debug, Clone)]
pub struct DoublingReport {
    /// (log r, g(2r)/g(r)) for every scale where both ends were in domain.
    pub ratios: Vec<(f64, f64)>,
    /// (log r, reason) for scales that were skipped.
    pub skipped: Vec<(f64, String)>,
    /// Largest ratio over the valid scales.
    pub max_ratio: Option<f64>,
}

/// Evaluates g(2r)/g(r) at each requested log-scale, skipping (with a
/// recorded reason) any scale where r or 2r leaves the gauge's domain.
pub fn doubling_report(gauge: &GaugeFunction, log_scales: &[f64]) -> DoublingReport {
    let ln2 = std::f64::consts::LN_2;
    let mut ratios = Vec::new();
    let mut skipped = Vec::new();
    for &lr in log_scales {
        match gauge.eval_log(lr) {
            Err(e) => skipped.push((lr, format!("g(r): {e}"))),
            Ok(g1) => match gauge.eval_log(lr + ln2) {
                Err(e) => skipped.push((lr, format!("g(2r): {e}"))),
                Ok(g2) => ratios.push((lr, (g2 - g1).exp())),
            },
        }
    }
    let max_ratio = ratios
        .iter()
        .map(|&(_, q)| q)
        .fold(None, |m: Option<f64>, q| Some(m.map_or(q, |x| x.max(q))));
    DoublingReport { ratios, skipped, max_ratio }
}
