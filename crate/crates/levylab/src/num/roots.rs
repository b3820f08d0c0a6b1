//! Bracketing scalar root finder: bisection with secant acceleration.
//!
//! Every inverse in the mechanism layer (ψ⁻¹, φ⁻¹, v, u, the Laplace
//! functional's x*) is a root of a monotone function, so a guaranteed
//! bracket plus opportunistic secant steps is both robust and fast.

use crate::error::{LabError, Result};

/// Default relative tolerance on the root.
pub const RTOL: f64 = 1e-10;
/// Default absolute tolerance on the root.
pub const ATOL: f64 = 1e-12;
/// Iteration cap; a halving iteration loses at least one bit per step so
/// 200 is far beyond exhaustion of f64.
pub const MAX_ITER: usize = 200;

/// Solve f(x) = 0 for f nondecreasing on [lo, hi] with f(lo) ≤ 0 ≤ f(hi).
///
/// Maintains the bracket invariant throughout; a secant proposal is used
/// whenever it lands strictly inside the current bracket, otherwise the
/// step falls back to bisection. Terminates when the bracket width drops
/// below `atol + rtol·|mid|`.
pub fn solve_increasing<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    rtol: f64,
    atol: f64,
) -> Result<f64> {
    if !(lo <= hi) {
        return Err(LabError::RootFind(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo > 0.0 || fhi < 0.0 {
        return Err(LabError::RootFind(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    // Alternate secant with forced bisection whenever the previous step
    // failed to halve the bracket; this keeps secant's speed on tame
    // functions while guaranteeing bisection's worst case (regula falsi
    // alone creeps one-sidedly on convex functions like e^x − K).
    let mut force_bisect = false;
    for _ in 0..MAX_ITER {
        let w = hi - lo;
        let mid = 0.5 * (lo + hi);
        if w <= atol + rtol * mid.abs() {
            return Ok(mid);
        }
        let mut x = if force_bisect {
            mid
        } else {
            lo - flo * w / (fhi - flo)
        };
        if !(x > lo && x < hi) || !x.is_finite() {
            x = mid;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        force_bisect = hi - lo > 0.5 * w;
    }
    Err(LabError::RootFind(format!(
        "no convergence in {MAX_ITER} iterations; bracket [{lo:e}, {hi:e}]"
    )))
}

/// Expand `hi` geometrically (factor 4) until f(hi) ≥ 0, starting from a
/// positive seed; used to build brackets for unbounded inverses.
pub fn expand_upper<F: FnMut(f64) -> f64>(mut f: F, mut hi: f64, cap: f64) -> Result<f64> {
    for _ in 0..2048 {
        if f(hi) >= 0.0 {
            return Ok(hi);
        }
        hi *= 4.0;
        if hi > cap {
            return Err(LabError::RootFind(format!(
                "bracket expansion exceeded cap {cap:e}"
            )));
        }
    }
    Err(LabError::RootFind("bracket expansion stalled".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_root() {
        let r = solve_increasing(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, 1e-15).unwrap();
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn endpoint_root() {
        assert_eq!(solve_increasing(|x| x, 0.0, 1.0, RTOL, ATOL).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(solve_increasing(|x| x + 10.0, 0.0, 1.0, RTOL, ATOL).is_err());
    }

    #[test]
    fn expansion_finds_bracket() {
        let hi = expand_upper(|x| x - 1e6, 1.0, 1e300).unwrap();
        assert!(hi >= 1e6);
    }

    #[test]
    fn steep_exponential() {
        // f(x) = e^{x} − K: root ln K; exercises the secant/bisection mix on
        // a badly scaled bracket.
        let k = 1e12f64;
        let r = solve_increasing(|x| x.exp() - k, 0.0, 700.0, 1e-12, 1e-14).unwrap();
        assert!((r - k.ln()).abs() < 1e-9);
    }
}
