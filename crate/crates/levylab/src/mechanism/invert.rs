//! Inverses and integral solves built on the log-domain ψ family:
//! ψ⁻¹, φ = ψ′∘ψ⁻¹ and its inverse, the tail integral ∫_v^∞ du/ψ(u), the
//! extinction-time profile v(a), and the Laplace-flow solve u(t, λ).
//!
//! Everything here is generic root-finding/quadrature over `log_psi` and
//! `log_psi_prime`; closed forms for the stable family appear only in the
//! tests, as independent oracles.

use super::BranchingMechanism;
use crate::error::{LabError, Result};
use crate::num::{integrate, integrate_tail, solve_increasing};

/// Tolerances for root solves carried out on log-axes. f64 carries ~16
/// digits, log-arguments stay below ~10⁴ here, so 1e-12 leaves headroom
/// while keeping round-trip errors near 1e-9 in value.
const LOG_RTOL: f64 = 1e-12;
const LOG_ATOL: f64 = 1e-12;
/// Quadrature tolerance for dw/ψ integrals. Root solves against these
/// integrals amplify quadrature error by 1/(γ−1) (× 5 at γ = 1.2), and the
/// derived quantities are checked down to 1e-8, so the integrals themselves
/// need to be a few digits better than that.
const INT_RTOL: f64 = 1e-12;

/// Expands `[lo, hi]` until `f` changes sign across it, stepping the
/// deficient end outward by `step`. `f` must be nondecreasing.
fn expand_bracket<F: FnMut(f64) -> f64>(
    f: &mut F,
    mut lo: f64,
    mut hi: f64,
    step: f64,
    limit: f64,
) -> Result<(f64, f64)> {
    while f(lo) > 0.0 {
        hi = lo;
        lo -= step;
        if lo < -limit {
            return Err(LabError::RootFind(format!(
                "no sign change above log-argument {lo:e}"
            )));
        }
    }
    while f(hi) < 0.0 {
        lo = hi;
        hi += step;
        if hi > limit {
            return Err(LabError::RootFind(format!(
                "no sign change below log-argument {hi:e}"
            )));
        }
    }
    Ok((lo, hi))
}

/// log ψ⁻¹(e^{ly}): the unique lx with log ψ(e^{lx}) = ly.
pub fn psi_inv_log(mech: &BranchingMechanism, ly: f64) -> Result<f64> {
    if !ly.is_finite() {
        return Err(LabError::Domain(format!("psi_inv needs finite log-argument, got {ly}")));
    }
    let mut f = |lx: f64| mech.log_psi(lx) - ly;
    let (lo, hi) = expand_bracket(&mut f, -700.0, 700.0, 400.0, 1.0e7)?;
    solve_increasing(&mut f, lo, hi, LOG_RTOL, LOG_ATOL)
}

/// ψ⁻¹(y) in plain domain, y > 0.
pub fn psi_inv(mech: &BranchingMechanism, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(LabError::Domain(format!("psi_inv needs y > 0, got {y}")));
    }
    Ok(psi_inv_log(mech, y.ln())?.exp())
}

/// log φ(e^{ly}) where φ = ψ′ ∘ ψ⁻¹.
pub fn phi_log(mech: &BranchingMechanism, ly: f64) -> Result<f64> {
    Ok(mech.log_psi_prime(psi_inv_log(mech, ly)?))
}

/// log φ⁻¹(e^{ly}), computed as log ψ(z) at the z solving ψ′(z) = e^{ly}.
///
/// For mechanisms whose ψ′ saturates (finite atom lists with β = 0) the
/// inverse only exists below log ψ′(∞); beyond it this is a domain error,
/// not a root-finding failure.
pub fn phi_inv_log(mech: &BranchingMechanism, ly: f64) -> Result<f64> {
    if !ly.is_finite() {
        return Err(LabError::Domain(format!(
            "phi_inv needs finite log-argument, got {ly}"
        )));
    }
    if mech.alpha > 0.0 && ly <= mech.alpha.ln() {
        return Err(LabError::Domain(format!(
            "phi_inv argument {:e} is at or below the drift floor ψ′(0) = α",
            ly.exp()
        )));
    }
    if let Some(sup) = mech.log_psi_prime_sup() {
        // Stay a hair inside the asymptote: the root solve degenerates as
        // ψ′ flattens out.
        if ly >= sup - 1e-9 {
            return Err(LabError::Domain(format!(
                "phi_inv argument has log {ly:.6e}, but ψ′ saturates at log {sup:.6e}"
            )));
        }
    }
    let mut f = |lz: f64| mech.log_psi_prime(lz) - ly;
    let (lo, hi) = expand_bracket(&mut f, -700.0, 700.0, 400.0, 1.0e7)?;
    let lz = solve_increasing(&mut f, lo, hi, LOG_RTOL, LOG_ATOL)?;
    Ok(mech.log_psi(lz))
}

/// ∫_v^∞ du/ψ(u). Structural first: the integral converges iff ψ grows
/// superlinearly, and a finite atom list (β = 0) never does — numerics on
/// an underflowing 1/ψ would silently report convergence there.
pub fn tail_integral(mech: &BranchingMechanism, v: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(LabError::Domain(format!("tail integral needs v > 0, got {v}")));
    }
    if !mech.extinction_holds() {
        return Err(LabError::Divergent(
            "∫^∞ du/ψ diverges: ψ is asymptotically linear".into(),
        ));
    }
    let lv = v.ln();
    if -mech.log_psi(lv) > 700.0 {
        return Err(LabError::Quadrature(format!(
            "1/ψ exceeds f64 range at the lower limit v = {v:e}"
        )));
    }
    let mut f = |u: f64| (-mech.log_psi(u.ln())).exp();
    integrate_tail(&mut f, v, INT_RTOL, 1e280)
}

/// v(a): the unique v > 0 with ∫_v^∞ du/ψ(u) = a, a > 0. Requires the
/// tail integral to converge.
pub fn solve_v(mech: &BranchingMechanism, a: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(LabError::Domain(format!("solve_v needs a > 0, got {a}")));
    }
    if !mech.extinction_holds() {
        return Err(LabError::Divergent(
            "v(a) undefined: ∫^∞ du/ψ diverges".into(),
        ));
    }
    // Tail value at a log-scale, with out-of-range lows treated as +∞
    // (the tail integral blows up as v → 0 faster than f64 can hold).
    let tail_at = |lv: f64| -> Result<f64> {
        match tail_integral(mech, lv.exp()) {
            Ok(t) => Ok(t),
            Err(LabError::Quadrature(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    // Expand a log-bracket: T is decreasing, so the residual a − T(e^{lv})
    // is increasing in lv.
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    while tail_at(lo)? < a {
        hi = lo;
        lo -= 40.0;
        if lo < -4000.0 {
            return Err(LabError::RootFind(format!("v({a:e}) below representable range")));
        }
    }
    while tail_at(hi)? > a {
        lo = hi;
        hi += 40.0;
        if hi > 4000.0 {
            return Err(LabError::RootFind(format!("v({a:e}) above representable range")));
        }
    }
    let mut res = |lv: f64| a - tail_at(lv).unwrap_or(f64::INFINITY);
    let lv = solve_increasing(&mut res, lo, hi, LOG_RTOL, LOG_ATOL)?;
    Ok(lv.exp())
}

/// u(t, λ): the value at time t of the flow u̇ = −ψ(u), u(0) = λ;
/// equivalently the unique u ∈ (0, λ] with ∫_u^λ dw/ψ(w) = t.
pub fn solve_u(mech: &BranchingMechanism, t: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(LabError::Domain(format!("solve_u needs λ > 0, got {lambda}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(LabError::Domain(format!("solve_u needs t ≥ 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(lambda);
    }
    let ll = lambda.ln();
    // ∫_{e^{lu}}^λ dw/ψ(w) as a smooth log-substituted integral
    // ∫ exp(s − log ψ(e^s)) ds — no endpoint singularity in s.
    let flow = |lu: f64| -> Result<f64> {
        let mut f = |s: f64| (s - mech.log_psi(s)).exp();
        Ok(integrate(&mut f, lu, ll, INT_RTOL, 0.0)?.0)
    };
    // ψ is convex with ψ(0) = 0, so dw/ψ diverges at 0 and the bracket
    // expansion below always terminates.
    let mut lo = ll - 1.0;
    let mut hi = ll;
    let mut step = 1.0f64;
    while flow(lo)? < t {
        hi = lo;
        lo -= step;
        step *= 2.0;
        if lo < -4000.0 {
            return Err(LabError::RootFind(format!(
                "u({t:e}, {lambda:e}) below representable range"
            )));
        }
    }
    let mut res = |lu: f64| t - flow(lu).unwrap_or(f64::NAN);
    let lu = solve_increasing(&mut res, lo, hi, LOG_RTOL, LOG_ATOL)?;
    Ok(lu.exp())
}
