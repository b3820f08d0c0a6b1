//! Laplace kernels of the height process: the level kernel κ_a(λ, μ), the
//! ball-mass functional 𝓛_r(λ), the closed-ball density bound, and the
//! mean-local-time normalization.
//!
//! κ is produced by two independent routes — an adaptive ODE integration
//! of ∂κ/∂a = λ − ψ(κ) and the implicit integral ∫_μ^κ du/(λ − ψ(u)) = a —
//! and 𝓛 likewise (through κ, and through the integral equation
//! ∫₀^{x*} dx/φ(λ(1 − e^{−x})) = r). The pairs of routes are kept separate
//! on purpose: their agreement is one of the things being measured.

mod density;

pub use density::{density_bound_check, mean_local_time, psi_growth_implication, DensityBound};

use crate::error::{LabError, Result};
use crate::mechanism::{phi_log, BranchingMechanism};
use crate::num::{integrate, integrate_ode, solve_increasing};

/// Local tolerance for the κ ODE.
const ODE_TOL: f64 = 1e-10;
/// Inner (quadrature) tolerance for integral routes.
const INNER_RTOL: f64 = 1e-9;
/// Outer tolerance on the root x* of the 𝓛 integral equation.
const OUTER_RTOL: f64 = 1e-8;

/// κ_a(λ, μ) together with its integral-form residual certificate.
#[derive(Debug, Clone, Copy)]
pub struct KappaSolution {
    pub kappa: f64,
    /// ∫_μ^κ du/(λ − ψ(u)) − a, signed; 0 when the start value sits at the
    /// fixed point ψ⁻¹(λ) (there the integral form degenerates).
    pub residual: f64,
}

/// Solves ∂κ/∂a = λ − ψ(κ), κ(0) = μ, forward to level-distance `a`, and
/// certifies the result against the implicit integral form.
///
/// Both the increasing branch (μ < ψ⁻¹(λ)) and the decreasing one
/// (μ > ψ⁻¹(λ)) are supported. Once κ is within f64 rounding of the
/// equilibrium the certificate integrand 1/(λ − ψ(u)) is pure noise, so
/// the residual is reported as 0 there — the ODE answer *is* the
/// equilibrium at working precision.
pub fn kappa_solve(
    mech: &BranchingMechanism,
    a: f64,
    lambda: f64,
    mu: f64,
) -> Result<KappaSolution> {
    if !(a >= 0.0) || !(lambda >= 0.0) || !(mu >= 0.0) {
        return Err(LabError::Domain(format!(
            "kappa_solve needs a, λ, μ ≥ 0, got a={a}, λ={lambda}, μ={mu}"
        )));
    }
    if a == 0.0 {
        return Ok(KappaSolution { kappa: mu, residual: 0.0 });
    }
    let psi_at = |k: f64| if k <= 0.0 { 0.0 } else { mech.psi(k) };
    let kappa = integrate_ode(|_, k| lambda - psi_at(k), 0.0, mu, a, ODE_TOL, ODE_TOL)?;

    // Fixed-point / rounding-floor detection for the certificate.
    let eq_scale = 1e-12 * lambda.max(1.0);
    if (lambda - psi_at(mu)).abs() <= eq_scale || (lambda - psi_at(kappa)).abs() <= eq_scale {
        return Ok(KappaSolution { kappa, residual: 0.0 });
    }
    let (lo, hi, sign) = if kappa >= mu { (mu, kappa, 1.0) } else { (kappa, mu, -1.0) };
    let mut g = |u: f64| (lambda - psi_at(u)).recip();
    let (integral, _) = integrate(&mut g, lo, hi, INNER_RTOL, 1e-12)?;
    Ok(KappaSolution { kappa, residual: sign * integral - a })
}

/// The ball-mass Laplace functional 𝓛_r(λ), by both routes.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceFunctional {
    /// Canonical value e^{−x*} (integral route; well conditioned even when
    /// the value underflows toward 0).
    pub value: f64,
    /// x* = −log 𝓛_r(λ), exact from the integral route.
    pub minus_log: f64,
    /// 1 − ψ(κ_r(λ, 0))/λ from the ODE route.
    pub route_ode: f64,
    /// e^{−x*} from the integral route (same as `value`).
    pub route_integral: f64,
    /// |route_ode − route_integral| / route_integral.
    pub discrepancy: f64,
}

/// Where the x-integral switches from the w = 1 − e^{−x} substitution
/// (which carries the x = 0 singularity) to the plain x-domain.
const SPLIT_X: f64 = 1.0;

/// ∫₀^x ds/φ(λ(1 − e^{−s})), split at SPLIT_X.
///
/// Public so the defining identity of 𝓛 can be re-checked from outside:
/// at x = −log 𝓛_r(λ) this integral must return r.
pub fn ell_integral(mech: &BranchingMechanism, lambda: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(LabError::Domain(format!("ell_integral needs x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    // φ(y) for y > 0, plain domain.
    let phi_at = |mech: &BranchingMechanism, y: f64| -> Result<f64> {
        Ok(phi_log(mech, y.ln())?.exp())
    };
    let head_x = x.min(SPLIT_X);
    // w-substitution: ds = dw/(1 − w), integrand 1/((1 − w) φ(λ w)).
    let w_hi = -(-head_x).exp_m1();
    let mut err: Option<LabError> = None;
    let mut fw = |w: f64| match phi_at(mech, lambda * w) {
        Ok(p) => ((1.0 - w) * p).recip(),
        Err(e) => {
            err = Some(e);
            f64::NAN
        }
    };
    let (head, _) = integrate(&mut fw, 0.0, w_hi, INNER_RTOL, 0.0)?;
    if let Some(e) = err {
        return Err(e);
    }
    if x <= SPLIT_X {
        return Ok(head);
    }
    let mut fs = |s: f64| match phi_at(mech, lambda * (-(-s).exp_m1())) {
        Ok(p) => p.recip(),
        Err(e) => {
            err = Some(e);
            f64::NAN
        }
    };
    let (tail, _) = integrate(&mut fs, SPLIT_X, x, INNER_RTOL, 0.0)?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(head + tail)
}

/// Evaluates 𝓛_r(λ) by the ODE route (through κ_r(λ,0)) and the integral
/// route (root x* of ∫₀^{x*} ds/φ(λ(1−e^{−s})) = r), reporting both and
/// their relative discrepancy.
pub fn script_l(mech: &BranchingMechanism, r: f64, lambda: f64) -> Result<LaplaceFunctional> {
    if !(r > 0.0) || !(lambda > 0.0) {
        return Err(LabError::Domain(format!(
            "script_l needs r > 0 and λ > 0, got r={r}, λ={lambda}"
        )));
    }
    // Integral route: expand a bracket for x*, then solve.
    let mut hi = 1.0f64;
    loop {
        if ell_integral(mech, lambda, hi)? >= r {
            break;
        }
        hi *= 2.0;
        if hi > 1e6 {
            return Err(LabError::RootFind(format!(
                "x* bracket expansion exceeded 1e6 at r={r}, λ={lambda}"
            )));
        }
    }
    let mut err: Option<LabError> = None;
    let root = solve_increasing(
        |x| match ell_integral(mech, lambda, x) {
            Ok(v) => v - r,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        0.0,
        hi,
        OUTER_RTOL,
        1e-12,
    );
    if let Some(e) = err {
        return Err(e);
    }
    let x_star = root?;
    let route_integral = (-x_star).exp();

    // ODE route through κ.
    let kappa = kappa_solve(mech, r, lambda, 0.0)?.kappa;
    let route_ode = 1.0 - mech.psi(kappa.max(0.0)) / lambda;

    let discrepancy = (route_ode - route_integral).abs() / route_integral.max(1e-300);
    Ok(LaplaceFunctional {
        value: route_integral,
        minus_log: x_star,
        route_ode,
        route_integral,
        discrepancy,
    })
}
