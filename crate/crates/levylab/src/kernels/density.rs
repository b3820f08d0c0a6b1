//! The closed-ball density estimate and small helpers around it.
//!
//! The key inequality compares the ball-mass functional at a carefully
//! inflated argument against a double-logarithmic budget:
//!
//!     𝓛_{2r}(C₂ φ⁻¹((2/r) · log log(2/r)))  ≤  exp(−2 log log(2/r)),
//!
//! with C₂ = (1 − e⁻¹)⁻¹. Both sides head to 0 fast, so the comparison is
//! carried on logs, with the left side's log coming from the x* route.

use super::script_l;
use crate::error::{LabError, Result};
use crate::mechanism::{phi_inv_log, BranchingMechanism};

/// One evaluation of the density inequality at radius r.
#[derive(Debug, Clone, Copy)]
pub struct DensityBound {
    pub r: f64,
    /// log of 𝓛_{2r}(C₂ φ⁻¹((2/r) log log(2/r))).
    pub lhs_log: f64,
    /// −2 log log(2/r).
    pub rhs_log: f64,
    pub pass: bool,
    /// Relative gap between the two 𝓛 routes at the evaluation point.
    pub route_discrepancy: f64,
}

/// Checks the density inequality at radius r.
///
/// Requires log log(2/r) ≥ 2 (r ≲ 1.23e−3): above that the inequality's
/// small-radius regime does not apply and no claim is made.
pub fn density_bound_check(mech: &BranchingMechanism, r: f64) -> Result<DensityBound> {
    if !(r > 0.0) {
        return Err(LabError::Domain(format!("radius must be positive, got {r}")));
    }
    let ll2 = (2.0 / r).ln().ln();
    if !(ll2 >= 2.0) {
        return Err(LabError::Domain(format!(
            "radius {r:e} outside the small-ball regime: log log(2/r) = {ll2:.3} < 2"
        )));
    }
    let c2 = 1.0 / (1.0 - std::f64::consts::E.recip());
    // λ = C₂ φ⁻¹((2/r)·ll2), assembled in log-domain first so an
    // out-of-range argument fails with a domain message, not an overflow.
    let log_y = (2.0 / r).ln() + ll2.ln();
    let log_lambda = c2.ln() + phi_inv_log(mech, log_y)?;
    if log_lambda > 700.0 {
        return Err(LabError::Domain(format!(
            "evaluation argument exp({log_lambda:.1}) exceeds f64 range"
        )));
    }
    let s = script_l(mech, 2.0 * r, log_lambda.exp())?;
    let lhs_log = -s.minus_log;
    let rhs_log = -2.0 * ll2;
    Ok(DensityBound {
        r,
        lhs_log,
        rhs_log,
        pass: lhs_log <= rhs_log,
        route_discrepancy: s.discrepancy,
    })
}

/// Mean local time at level a under the normalized excursion measure:
/// e^{−αa}; the normalization constant for local-time checks.
pub fn mean_local_time(mech: &BranchingMechanism, a: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(LabError::Domain(format!("level must be ≥ 0, got {a}")));
    }
    Ok((-mech.alpha * a).exp())
}

/// The elementary implication used by the density proof's small-argument
/// step: if −log 𝓛_r(λ) ≤ 1 then (2/λ)ψ(rλ/2) ≤ 1.
///
/// Returns `None` when the hypothesis fails at (r, λ) (no claim), else
/// whether the conclusion holds.
pub fn psi_growth_implication(
    mech: &BranchingMechanism,
    r: f64,
    lambda: f64,
) -> Result<Option<bool>> {
    let s = script_l(mech, r, lambda)?;
    if s.minus_log > 1.0 {
        return Ok(None);
    }
    let conclusion = (2.0 / lambda) * mech.psi(r * lambda / 2.0);
    Ok(Some(conclusion <= 1.0 + 1e-12))
}
