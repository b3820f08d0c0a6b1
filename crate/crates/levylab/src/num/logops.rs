//! Log-domain special functions.
//!
//! The atom-series mechanisms place weight e^{+O(n²)} at positions e^{−O(n²)},
//! far outside f64 range, so every series term is manipulated through its
//! logarithm. The two kernels needed are h(x) = e^{−x} − 1 + x (the integrand
//! of the Lévy–Khintchine form) and 1 − e^{−x} (its derivative), both taking
//! the *logarithm* of x and returning the logarithm of the value.

/// log Σ e^{v_i}, tolerant of −∞ entries and empty input (returns −∞).
pub fn logsumexp(vals: &[f64]) -> f64 {
    let m = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = vals.iter().map(|v| (v - m).exp()).sum();
    m + s.ln()
}

/// log h(x) for h(x) = e^{−x} − 1 + x, given lx = log x.
///
/// h(x) ~ x²/2 as x → 0 and h(x) ~ x − 1 as x → ∞; the middle range is
/// evaluated through expm1 (the cancellation leaves a relative error of
/// order 1e−13 at the series/expm1 seam, well inside the solver tolerances).
pub fn logh_of_log(lx: f64) -> f64 {
    if lx > 700.0 {
        // x itself overflows f64; h(x) = x − 1 + e^{−x} and both corrections
        // are below 1 ulp of log x.
        return lx;
    }
    let x = lx.exp();
    if x > 690.0 {
        // h(x) = x − 1 up to e^{−x} < 1e−299.
        lx + (-1.0 / x).ln_1p()
    } else if x > 1e-3 {
        ((-x).exp_m1() + x).ln()
    } else {
        // h(x) = (x²/2)(1 − x/3 + x²/12 − x³/60 + …)
        2.0 * lx - core::f64::consts::LN_2 + (-x / 3.0 + x * x / 12.0 - x * x * x / 60.0).ln_1p()
    }
}

/// log(1 − e^{−x}) given lx = log x.
///
/// This is the log of the increasing factor in ψ′; it tends to 0 from below
/// as x → ∞ and behaves like log x as x → 0.
pub fn log1mexp_of_log(lx: f64) -> f64 {
    if lx > 700.0 {
        // 1 − e^{−x} = 1 to within e^{−e^{700}}.
        return 0.0;
    }
    let x = lx.exp();
    if x > 1e-3 {
        (-(-x).exp_m1()).ln()
    } else {
        // 1 − e^{−x} = x(1 − x/2 + x²/6 − x³/24 + …)
        lx + (-x / 2.0 + x * x / 6.0 - x * x * x / 24.0).ln_1p()
    }
}

/// log log(1/r) given log r < 0; callers must ensure log(1/r) > 1.
pub fn loglog_from_log(log_r: f64) -> f64 {
    debug_assert!(log_r < 0.0);
    (-log_r).ln()
}
