//! Subordinators: the ball-mass bound S_r and the spine-length process U.
//!
//! [`sample_subordinator`] draws the subordinator whose Laplace exponent is
//! φ* = φ − α on a dyadic radius grid. For pure power mechanisms
//! φ*(λ) = c·λ^a with a = (γ−1)/γ, so every increment is an exactly scaled
//! one-sided stable variable from [`sample_positive_stable`] (Kanter's
//! transform). No other mechanism exposes the jump decomposition of φ*, and
//! the sampler says so rather than approximating silently.
//!
//! [`sample_height_jump_process`] draws the jump part of the companion
//! subordinator with exponent ψ′ − α (the spine-length process): atomic
//! Lévy measures give a finite-activity compound Poisson draw, the stable
//! family a small-jump-truncated one with exact drift compensation.
//!
//! [`liminf_ratio`] is the shared grid statistic min value(r)/g(r).

use crate::error::{LabError, Result};
use crate::mechanism::{BranchingMechanism, GaugeFunction, LevyMeasure};
use crate::num::{logsumexp, stream, KahanSum};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

/// One-sided stable draw with E[e^{−λX}] = e^{−λ^a}, 0 < a < 1.
///
/// Kanter's exact transform: X = (A(θ)/W)^{(1−a)/a} with θ uniform on
/// (0,π), W a unit exponential, and
/// A(θ) = [sin(aθ)^a · sin((1−a)θ)^{1−a} / sin θ]^{1/(1−a)}, evaluated in
/// logs so extreme indices stay finite.
pub fn sample_positive_stable<R: Rng>(index: f64, rng: &mut R) -> Result<f64> {
    if !(index > 0.0 && index < 1.0) {
        return Err(LabError::Domain(format!(
            "one-sided stable index {index} outside (0, 1)"
        )));
    }
    let a = index;
    let mut u: f64 = rng.gen();
    while u == 0.0 {
        u = rng.gen();
    }
    let theta = std::f64::consts::PI * u;
    let w: f64 = Exp1.sample(rng);
    let w = w.max(1e-300);
    let log_a_fun = (a * (a * theta).sin().ln()
        + (1.0 - a) * ((1.0 - a) * theta).sin().ln()
        - theta.sin().ln())
        / (1.0 - a);
    Ok((((1.0 - a) / a) * (log_a_fun - w.ln())).exp())
}

/// A subordinator path on a radius grid.
#[derive(Debug, Clone)]
pub struct SubordinatorPath {
    /// Grid radii, ascending, starting at 0.
    pub radii: Vec<f64>,
    /// Cumulative values S_r; nondecreasing, S_0 = 0.
    pub values: Vec<f64>,
    /// Human-readable exponent the increments realize.
    pub exponent: String,
}

/// Pure-power reading (a, c) of φ*(λ) = c·λ^a, when the mechanism has one.
fn phi_star_power(mech: &BranchingMechanism) -> Result<(f64, f64)> {
    match mech.measure {
        LevyMeasure::StableTail { gamma } if mech.alpha == 0.0 && mech.beta == 0.0 => {
            Ok(((gamma - 1.0) / gamma, gamma))
        }
        LevyMeasure::Null if mech.alpha == 0.0 && mech.beta > 0.0 => {
            // ψ = βλ²: φ*(λ) = 2β·ψ⁻¹(λ) = 2√(βλ).
            Ok((0.5, 2.0 * mech.beta.sqrt()))
        }
        _ => Err(LabError::UnsupportedExponent(
            "φ* = φ − α has a samplable jump decomposition only for pure power \
             mechanisms; drift or atomic parts are not supported"
                .into(),
        )),
    }
}

/// Draw S on the dyadic grid {0} ∪ {2^{−nmax}, …, 1}, exponent φ* = φ − α.
///
/// Increments over consecutive grid intervals are independent; an increment
/// of length Δ is (cΔ)^{1/a}·X with X from [`sample_positive_stable`], so
/// E[e^{−λ·inc}] = e^{−Δ·c·λ^a} exactly. Deterministic for fixed
/// (seed, nmax).
pub fn sample_subordinator(
    mech: &BranchingMechanism,
    nmax: u32,
    seed: u64,
) -> Result<SubordinatorPath> {
    let (a, c) = phi_star_power(mech)?;
    if nmax > 60 {
        return Err(LabError::Domain(format!(
            "dyadic depth {nmax} exceeds 60 (radii would underflow the grid)"
        )));
    }
    let mut radii = Vec::with_capacity(nmax as usize + 2);
    radii.push(0.0);
    for j in (0..=nmax).rev() {
        radii.push(2.0f64.powi(-(j as i32)));
    }
    let mut rng = stream(seed, 0);
    let mut running = KahanSum::new();
    let mut values = Vec::with_capacity(radii.len());
    values.push(0.0);
    for pair in radii.windows(2) {
        let delta = pair[1] - pair[0];
        let x = sample_positive_stable(a, &mut rng)?;
        running.add((c * delta).powf(1.0 / a) * x);
        values.push(running.value());
    }
    Ok(SubordinatorPath {
        radii,
        values,
        exponent: format!("phi_star(l) = {c} * l^{a}"),
    })
}

/// One jump of a subordinator path: where on [0, r_max] and how big.
#[derive(Debug, Clone, Copy)]
pub struct JumpRecord {
    pub position: f64,
    pub size: f64,
}

/// Jump decomposition of the spine-length subordinator (exponent ψ′ − α =
/// 2βλ + ∫(1 − e^{−λx}) x π(dx)) over [0, r_max].
#[derive(Debug, Clone)]
pub struct HeightJumps {
    /// Deterministic drift rate (2β, plus the small-jump compensation for
    /// truncated stable draws).
    pub drift: f64,
    /// Portion of the drift restoring the mean of neglected small jumps.
    pub compensation: f64,
    /// Jumps sorted by position.
    pub jumps: Vec<JumpRecord>,
    /// Small-jump truncation level (0 when the draw is exact).
    pub truncation: f64,
}

/// Expected number of retained jumps used to pick the stable truncation
/// level; the compensating drift keeps the mean exact regardless.
const STABLE_JUMP_TARGET: f64 = 20_000.0;
/// Atomic jump rates above this (per drawn interval) are refused: the
/// counterexample atom lists have rates e^{O(n²)} and cannot be simulated.
const ATOM_RATE_CAP: f64 = 1.0e7;

/// Draw the jump part of the ψ′−α subordinator over [0, r_max].
pub fn sample_height_jump_process(
    mech: &BranchingMechanism,
    r_max: f64,
    seed: u64,
) -> Result<HeightJumps> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(LabError::Domain(format!(
            "jump process horizon r_max = {r_max} must be positive finite"
        )));
    }
    let mut rng = stream(seed, 0);
    match &mech.measure {
        LevyMeasure::Null => Ok(HeightJumps {
            drift: 2.0 * mech.beta,
            compensation: 0.0,
            jumps: Vec::new(),
            truncation: 0.0,
        }),
        LevyMeasure::StableTail { gamma } => {
            let g = *gamma;
            if g == 2.0 {
                // ψ = λ² has ψ′ − α = 2λ: pure drift, no jumps.
                return Ok(HeightJumps {
                    drift: 2.0 + 2.0 * mech.beta,
                    compensation: 0.0,
                    jumps: Vec::new(),
                    truncation: 0.0,
                });
            }
            // x·π(dx) = c_γ x^{−γ} dx with c_γ = γ(γ−1)/Γ(2−γ). Retain
            // jumps above ε (rate c_γ ε^{1−γ}/(γ−1)), put their mean back as
            // drift: the remainder is a zero-mean process whose variance
            // c_γ ε^{3−γ}/(3−γ) per unit length vanishes as ε → 0 while the
            // kept part has infinite variance — the truncation budget is met
            // with unbounded margin.
            let c = g * (g - 1.0) / gamma_fn(2.0 - g);
            let eps = (c * r_max / ((g - 1.0) * STABLE_JUMP_TARGET)).powf(1.0 / (g - 1.0));
            let rate = c / (g - 1.0) * eps.powf(1.0 - g);
            let compensation = c / (2.0 - g) * eps.powf(2.0 - g);
            let n = Poisson::new(rate * r_max)
                .map_err(|e| LabError::Domain(format!("jump count rate: {e}")))?
                .sample(&mut rng) as usize;
            let mut jumps: Vec<JumpRecord> = (0..n)
                .map(|_| {
                    // Tail inversion of c x^{−γ} above ε: x = ε·(1−u)^{−1/(γ−1)}.
                    let u: f64 = rng.gen();
                    JumpRecord {
                        position: rng.gen::<f64>() * r_max,
                        size: eps * (1.0 - u).powf(-1.0 / (g - 1.0)),
                    }
                })
                .collect();
            jumps.sort_by(|a, b| a.position.total_cmp(&b.position));
            Ok(HeightJumps {
                drift: 2.0 * mech.beta + compensation,
                compensation,
                jumps,
                truncation: eps,
            })
        }
        LevyMeasure::AtomList { atoms } => {
            // x·π(dx) = Σ wₙrₙ·δ_{rₙ}: finite activity, exact draw.
            let log_rates: Vec<f64> = atoms
                .iter()
                .map(|atom| atom.log_weight + atom.log_r)
                .collect();
            let log_rate = logsumexp(&log_rates);
            if log_rate + r_max.ln().max(0.0) > ATOM_RATE_CAP.ln() {
                return Err(LabError::ExactCapExceeded(format!(
                    "atomic jump rate exp({log_rate:.1}) over horizon {r_max} exceeds \
                     the {ATOM_RATE_CAP:.0e} cap"
                )));
            }
            let rate = log_rate.exp();
            let cdf: Vec<f64> = log_rates
                .iter()
                .scan(0.0, |acc, &lr| {
                    *acc += (lr - log_rate).exp();
                    Some(*acc)
                })
                .collect();
            let n = Poisson::new(rate * r_max)
                .map_err(|e| LabError::Domain(format!("jump count rate: {e}")))?
                .sample(&mut rng) as usize;
            let mut jumps: Vec<JumpRecord> = (0..n)
                .map(|_| {
                    let u: f64 = rng.gen();
                    let idx = cdf.partition_point(|&cxx| cxx < u).min(atoms.len() - 1);
                    JumpRecord {
                        position: rng.gen::<f64>() * r_max,
                        size: atoms[idx].log_r.exp(),
                    }
                })
                .collect();
            jumps.sort_by(|a, b| a.position.total_cmp(&b.position));
            Ok(HeightJumps {
                drift: 2.0 * mech.beta,
                compensation: 0.0,
                jumps,
                truncation: 0.0,
            })
        }
    }
}

/// Γ(x) for x ∈ (0, 1]: Lanczos approximation, plenty for the stable
/// normalizing constant c_γ = γ(γ−1)/Γ(2−γ).
fn gamma_fn(x: f64) -> f64 {
    // Lanczos g = 7, n = 9 coefficients.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + 6.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * acc
}

/// Grid statistic min over the window of value(r)/g(r).
///
/// Returns (min_ratio, argmin radius, full (r, ratio) profile). The values
/// must be nondecreasing and the window must sit inside (0, r0) where the
/// gauge exists.
pub fn liminf_ratio(
    radii: &[f64],
    values: &[f64],
    gauge: &GaugeFunction,
    r_window: (f64, f64),
) -> Result<(f64, f64, Vec<(f64, f64)>)> {
    if radii.len() != values.len() || radii.is_empty() {
        return Err(LabError::Domain(
            "radius and value grids must align and be nonempty".into(),
        ));
    }
    for pair in values.windows(2) {
        if pair[1] < pair[0] {
            return Err(LabError::Domain(format!(
                "values must be nondecreasing; saw {} after {}",
                pair[1], pair[0]
            )));
        }
    }
    let (lo, hi) = r_window;
    if !(lo > 0.0 && lo < hi && hi < gauge.r0()) {
        return Err(LabError::Domain(format!(
            "window [{lo}, {hi}] must sit inside (0, r0 = {:.6})",
            gauge.r0()
        )));
    }
    let mut profile = Vec::new();
    let mut min_ratio = f64::INFINITY;
    let mut argmin = f64::NAN;
    for (&r, &v) in radii.iter().zip(values) {
        if r < lo || r > hi {
            continue;
        }
        let ratio = v / gauge.eval(r)?;
        if ratio < min_ratio {
            min_ratio = ratio;
            argmin = r;
        }
        profile.push((r, ratio));
    }
    if profile.is_empty() {
        return Err(LabError::Domain(format!(
            "window [{lo}, {hi}] contains no grid radii"
        )));
    }
    Ok((min_ratio, argmin, profile))
}
