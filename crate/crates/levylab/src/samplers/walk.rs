//! Galton–Watson walk excursions and their rescaled tree codings.
//!
//! Two generators live here:
//!
//! - [`sample_walk_excursion`] — run the critical offspring walk from 0 to
//!   its first passage of −1 and resample until the excursion is long
//!   enough. Honest but heavy-tailed: conditioned on being long the
//!   excursion has infinite expected length, so this route is for moderate
//!   lengths.
//! - [`sample_contour_excursion`] — a fair ±1 contour excursion of exactly
//!   2·n_up steps, drawn by the cycle lemma (shuffle n_up up-steps with
//!   n_up+1 down-steps, rotate to the unique first-passage representative,
//!   drop the final step). This is the conditioned law itself, at any
//!   length, in linear time — the workhorse for 2²⁰-sample trees.
//!
//! [`kennedy_max_cdf`] is the closed-form distribution of the maximum of a
//! normalized Brownian excursion, used as the oracle for the scale-free
//! statistic max/√ζ.

use crate::error::{LabError, Result};
use crate::mechanism::{BranchingMechanism, LevyMeasure};
use crate::num::stream;
use crate::realtree::{ExcursionPath, PathOrigin};
use crate::samplers::height::{discrete_height, OffspringLaw};
use rand::seq::SliceRandom;

/// A finished offspring-walk excursion with its height process and the
/// rescaling dictionary that turns it into an [`ExcursionPath`].
#[derive(Debug, Clone)]
pub struct WalkExcursion {
    /// Steps ξ−1 ≥ −1, ending with the first passage to −1.
    pub steps: Vec<i64>,
    /// Height process H_0..H_N of the steps; starts and ends at 0.
    pub heights: Vec<u64>,
    /// Approximation scale p.
    pub scale_p: u32,
    /// Duration of one step after rescaling.
    pub time_scale: f64,
    /// Multiplier applied to integer heights after rescaling.
    pub space_scale: f64,
    /// Rejection attempts consumed (the accepted draw included).
    pub attempts: u32,
}

impl WalkExcursion {
    /// Number of walk steps (= vertices of the coded tree).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The rescaled excursion path coding the approximating tree.
    pub fn to_path(&self) -> Result<ExcursionPath> {
        let samples = self
            .heights
            .iter()
            .map(|&h| h as f64 * self.space_scale)
            .collect();
        ExcursionPath::new(samples, self.time_scale, PathOrigin::Simulated)
    }
}

fn stable_gamma(mech: &BranchingMechanism) -> Result<f64> {
    match mech.measure {
        LevyMeasure::StableTail { gamma } if mech.alpha == 0.0 && mech.beta == 0.0 => Ok(gamma),
        _ => Err(LabError::UnsupportedExponent(
            "walk excursions are generated for pure stable mechanisms only".into(),
        )),
    }
}

/// Rescale dictionary for the offspring-walk coding at scale p.
///
/// γ = 2: the Geometric(1/2) height process is an exact simple random walk,
/// so the diffusive pair (time 1/p², space 1/p) makes max/√ζ scale-free.
/// γ < 2: time 1/(p·b_p) and space b_p/p with b_p = p^{1/γ}; absolute
/// constants of the limit are absorbed by downstream estimates, and every
/// report carries the scale.
fn rescale_factors(gamma: f64, p: u32) -> (f64, f64) {
    let pf = p as f64;
    if gamma == 2.0 {
        (pf.powi(-2), 1.0 / pf)
    } else {
        let b_p = pf.powf(1.0 / gamma);
        (1.0 / (pf * b_p), b_p / pf)
    }
}

/// Draw one offspring-walk excursion of length ≥ `min_length`, resampling
/// as needed with a default budget of 100 000 attempts and no length cap.
pub fn sample_walk_excursion(
    mech: &BranchingMechanism,
    scale_p: u32,
    min_length: usize,
    seed: u64,
) -> Result<WalkExcursion> {
    sample_walk_excursion_with(mech, scale_p, min_length, None, 100_000, seed)
}

/// [`sample_walk_excursion`] with an explicit length cap and attempt budget.
///
/// A cap turns over-long draws into rejections; this conditions the law on
/// {min_length ≤ N ≤ max_length}, which tames the infinite conditional mean
/// of the uncapped rejection scheme.
pub fn sample_walk_excursion_with(
    mech: &BranchingMechanism,
    scale_p: u32,
    min_length: usize,
    max_length: Option<usize>,
    max_attempts: u32,
    seed: u64,
) -> Result<WalkExcursion> {
    let gamma = stable_gamma(mech)?;
    if scale_p == 0 {
        return Err(LabError::Domain("approximation scale p must be ≥ 1".into()));
    }
    if min_length < 2 {
        return Err(LabError::Domain(
            "excursions shorter than 2 steps code no tree; raise min_length".into(),
        ));
    }
    if let Some(cap) = max_length {
        if cap < min_length {
            return Err(LabError::Domain(format!(
                "max_length {cap} below min_length {min_length}"
            )));
        }
    }
    let law = OffspringLaw::new(gamma)?;
    let mut rng = stream(seed, 0);
    let (time_scale, space_scale) = rescale_factors(gamma, scale_p);

    for attempt in 1..=max_attempts {
        let mut steps: Vec<i64> = Vec::new();
        let mut s: i64 = 0;
        let mut overflow = false;
        loop {
            let step = law.sample_step(&mut rng);
            steps.push(step);
            s += step;
            if s < 0 {
                break;
            }
            if let Some(cap) = max_length {
                if steps.len() > cap {
                    overflow = true;
                    break;
                }
            }
        }
        if overflow || steps.len() < min_length {
            continue;
        }
        let heights = discrete_height(&steps)?;
        return Ok(WalkExcursion {
            steps,
            heights,
            scale_p,
            time_scale,
            space_scale,
            attempts: attempt,
        });
    }
    Err(LabError::BudgetExhausted(format!(
        "no excursion of length in [{min_length}, {}] in {max_attempts} attempts",
        max_length.map_or("∞".to_string(), |c| c.to_string()),
    )))
}

/// Fair ±1 contour excursion with exactly 2·n_up steps, by the cycle lemma.
///
/// Shuffling n_up up-steps with n_up+1 down-steps gives a uniform bridge to
/// −1; exactly one cyclic rotation is a first-passage path (the one starting
/// just after the first global minimum), and every Dyck prefix arises from
/// exactly 2n_up+1 bridge/rotation pairs — so after dropping the final
/// forced down-step the law is uniform over nonnegative ±1 paths from 0 to
/// 0, i.e. the contour of a Geometric(1/2) tree conditioned on its size.
///
/// `dt` and `space` are the per-step duration and the height multiplier of
/// the returned path; callers pick the bookkeeping that matches their
/// mechanism normalization.
pub fn sample_contour_excursion(
    n_up: usize,
    dt: f64,
    space: f64,
    seed: u64,
) -> Result<ExcursionPath> {
    if n_up == 0 {
        return Err(LabError::Domain(
            "a contour excursion needs at least one up-step".into(),
        ));
    }
    if !(dt > 0.0 && dt.is_finite() && space > 0.0 && space.is_finite()) {
        return Err(LabError::Domain(format!(
            "contour rescaling (dt={dt}, space={space}) must be positive finite"
        )));
    }
    let n = 2 * n_up + 1;
    let mut steps: Vec<i8> = Vec::with_capacity(n);
    steps.resize(n_up, 1);
    steps.resize(n, -1);
    let mut rng = stream(seed, 0);
    steps.shuffle(&mut rng);

    // First index (1-based prefix position) attaining the global minimum.
    let mut s: i64 = 0;
    let mut min_val = i64::MAX;
    let mut min_at = 0usize;
    for (i, &st) in steps.iter().enumerate() {
        s += i64::from(st);
        if s < min_val {
            min_val = s;
            min_at = i + 1;
        }
    }
    // Rotate so the minimum-reaching step comes last, then drop it.
    let rotated: Vec<i8> = steps[min_at..]
        .iter()
        .chain(steps[..min_at].iter())
        .copied()
        .collect();
    let mut samples = Vec::with_capacity(n);
    let mut h: i64 = 0;
    samples.push(0.0);
    for &st in &rotated[..n - 1] {
        h += i64::from(st);
        debug_assert!(h >= 0);
        samples.push(h as f64 * space);
    }
    ExcursionPath::new(samples, dt, PathOrigin::Simulated)
}

/// P(max ≤ x) for the maximum of a normalized Brownian excursion
/// (Kennedy's series): 1 − 2·Σ_{k≥1}(4k²x² − 1)·e^{−2k²x²}.
///
/// Below x = 0.2 the probability is under 10⁻⁷ and the alternating series
/// loses precision, so the function returns 0 there; samples of the
/// statistic concentrate well inside the series regime.
pub fn kennedy_max_cdf(x: f64) -> f64 {
    if !(x > 0.2) {
        return 0.0;
    }
    let mut sum = 0.0;
    for k in 1..=1000u32 {
        let y = 2.0 * (f64::from(k) * x).powi(2);
        let term = (2.0 * y - 1.0) * (-y).exp();
        sum += term;
        if y > 2.0 && term.abs() < 1e-17 {
            break;
        }
    }
    (1.0 - 2.0 * sum).clamp(0.0, 1.0)
}
