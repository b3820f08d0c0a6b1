//! Ball-mass density against the gauge: the profile r ↦ m(B̄(x, r))/g(r)
//! over a dyadic window of radii, whose lower envelope drives the exact
//! packing-measure constant.

use crate::error::{LabError, Result};
use crate::mechanism::GaugeFunction;
use crate::realtree::CodedTree;

/// m(B̄(x, r))/g(r) sampled on dyadic radii inside a window.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    /// Coding time of the center x.
    pub center: f64,
    /// Dyadic radii, ascending.
    pub radii: Vec<f64>,
    /// Closed-ball masses, one per radius (nondecreasing).
    pub masses: Vec<f64>,
    /// m/g per radius, combined in log-domain.
    pub ratios: Vec<f64>,
    /// Smallest ratio over the window.
    pub min_ratio: f64,
}

/// Density profile of the sampled tree around one center.
///
/// The window (lo, hi) must sit inside (0, r₀); the radii are the dyadic
/// scales 2^{−j}, j ≤ depth, that land in the window.
pub fn density_profile(
    tree: &CodedTree,
    center: f64,
    gauge: &GaugeFunction,
    window: (f64, f64),
    depth: u32,
) -> Result<DensityProfile> {
    let (lo, hi) = window;
    if !(0.0 < lo && lo < hi && hi < gauge.r0()) {
        return Err(LabError::Domain(format!(
            "window ({lo}, {hi}) must sit inside (0, {})",
            gauge.r0()
        )));
    }
    let radii: Vec<f64> = (0..=depth)
        .rev()
        .map(|j| f64::powi(2.0, -(j as i32)))
        .filter(|&r| lo <= r && r <= hi)
        .collect();
    if radii.is_empty() {
        return Err(LabError::Domain(format!(
            "no dyadic radius 2^-j, j ≤ {depth}, inside ({lo}, {hi})"
        )));
    }
    let mut masses = Vec::with_capacity(radii.len());
    let mut ratios = Vec::with_capacity(radii.len());
    for &r in &radii {
        let mass = tree.ball_mass(center, r)?;
        masses.push(mass);
        ratios.push((mass.ln() - gauge.eval_log(r.ln())?).exp());
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DensityProfile {
        center,
        radii,
        masses,
        ratios,
        min_ratio,
    })
}
