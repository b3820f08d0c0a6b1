//! The decorated spine: subtrees grafted along an ancestral line.
//!
//! Seen from a mass-random point, the tree decomposes into a spine of
//! height r_max carrying a Poisson cloud of subtree decorations with
//! intensity dU_r ⊗ N(dH), where U is the subordinator with exponent
//! ψ′ − α. The ball-mass process is
//!
//! ```text
//!     M*_r = Σ_j ∫ 1{ height of H*ʲ ≤ r − r*_j } ds,
//! ```
//!
//! the mass each decoration keeps below the observation radius.
//!
//! At γ = 2 the construction is lattice-exact: U_r = 2r is deterministic,
//! and the excursion measure is approximated by Geometric(1/2) trees with
//! edge length 1/p and vertex mass 1/p². That pair is forced by matching
//! both normalizations of the excursion measure: total-mass transforms
//! (N[1 − e^{−λζ}] = √λ against E[1 − w^N] = √(1 − w) for geometric trees)
//! and height tails (N[height > a] = 1/a against P(depth ≥ k) = 1/(k+1)),
//! which both give one discrete tree ≈ 1/p of N. The graft intensity
//! 2 dr ⊗ N therefore becomes TWO independent trees at every lattice
//! height k/p.
//!
//! The contour walk of such a tree is a fair ±1 coin walk killed on
//! reaching −1 (memoryless offspring make every up/down decision an
//! independent coin), and censoring the tree at depth L excises exactly
//! the above-L excursions, leaving the same coin walk with a forced
//! down-step at L. Each retained vertex is entered by exactly one rising
//! step, so counting rising steps per level (plus the root) is the exact
//! depth census, at expected cost ≈ 2(L+1) steps per tree.
//!
//! The same censoring gives a closed finite-scale oracle: with
//! w = e^{−λ/p²}, the censored-tree transform satisfies h_0 = w and
//! h_L = w/(2 − h_{L−1}), so E[e^{−λM*_r}] = Π_{L<pr} h_L² exactly at
//! scale p — an independent check for every Monte Carlo mean, which in
//! turn converges to e^{αr}𝓛_r(λ) as p grows (bias visibly O(1/p)).
//!
//! For γ < 2 the decorations are rescaled offspring-walk excursions at a
//! recorded approximation scale; those samples are structural (monotone,
//! dominated) rather than quantitatively calibrated.

use crate::error::{LabError, Result};
use crate::kernels::script_l;
use crate::mechanism::{BranchingMechanism, LevyMeasure};
use crate::num::{stream, CoinPool};
use crate::samplers::height::{discrete_height, OffspringLaw};
use crate::samplers::subord::{sample_height_jump_process, JumpRecord};
use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// One subtree grafted on the spine.
#[derive(Debug, Clone)]
pub struct SpineDecoration {
    /// Spine height r*_j of the graft point.
    pub position: f64,
    /// Cumulative mass profile within the observation window: (x, mass at
    /// height offsets ≤ x), nondecreasing in x.
    pub profile: Vec<(f64, f64)>,
    /// Total decorated mass within the window (the profile's last value).
    pub lifetime: f64,
}

/// A sampled spine over [0, r_max].
#[derive(Debug, Clone)]
pub struct SpineSample {
    pub r_max: f64,
    /// Scale p of the decoration approximation; every report carries it.
    pub approximation_scale: u32,
    /// Deterministic dU part (2β, plus truncation compensation at γ < 2).
    pub drift: f64,
    /// Jumps of U (empty at γ = 2, where U is pure drift).
    pub jumps: Vec<JumpRecord>,
    pub decorations: Vec<SpineDecoration>,
    /// Radius grid, ascending from 0.
    pub radii: Vec<f64>,
    /// Ball-mass process M*_r on the grid; M*_0 = 0, nondecreasing.
    pub m_star: Vec<f64>,
    /// Cumulative decorated lifetimes S_r on the grid; dominates M*_r.
    pub s_r: Vec<f64>,
}

/// Censored-tree contour walk: depth census of one Geometric(1/2) tree
/// pruned at `ceiling`. A rising step enters a fresh vertex along its
/// parent edge, so `counts[d]` gains one per vertex at depth d.
fn ceiling_walk_census<R: rand::RngCore>(
    ceiling: u32,
    pool: &mut CoinPool<R>,
    budget: &mut u64,
    counts: &mut [u64],
) -> Result<()> {
    let top = i64::from(ceiling);
    let mut h: i64 = 0;
    counts[0] += 1;
    loop {
        if *budget == 0 {
            return Err(LabError::BudgetExhausted(
                "spine decoration step budget exhausted".into(),
            ));
        }
        *budget -= 1;
        if h == top {
            h -= 1;
        } else if pool.coin() {
            h += 1;
            counts[h as usize] += 1;
        } else {
            h -= 1;
        }
        if h < 0 {
            return Ok(());
        }
    }
}

/// Censored-tree walk, vertex count only (hot path for Laplace estimates).
fn ceiling_walk_total<R: rand::RngCore>(ceiling: u32, pool: &mut CoinPool<R>) -> u64 {
    let top = i64::from(ceiling);
    let mut h: i64 = 0;
    let mut ups: u64 = 0;
    loop {
        if h == top {
            h -= 1;
        } else if pool.coin() {
            h += 1;
            ups += 1;
        } else {
            h -= 1;
        }
        if h < 0 {
            return 1 + ups;
        }
    }
}

/// Draw a decorated spine over [0, r_max].
///
/// `approx_scale` is the decoration scale p (γ = 2: lattice edge 1/(2p) and
/// vertex mass 1/p²; γ < 2: offspring-walk rescaling at p). `step_budget`
/// caps the total walk steps spent on decorations.
pub fn sample_spine(
    mech: &BranchingMechanism,
    r_max: f64,
    approx_scale: u32,
    seed: u64,
    step_budget: u64,
) -> Result<SpineSample> {
    let gamma = match mech.measure {
        LevyMeasure::StableTail { gamma } if mech.alpha == 0.0 && mech.beta == 0.0 => gamma,
        _ => {
            return Err(LabError::UnsupportedExponent(
                "spine decorations need a samplable excursion proxy; only pure \
                 stable mechanisms are supported"
                    .into(),
            ))
        }
    };
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(LabError::Domain(format!(
            "spine height r_max = {r_max} must be positive finite"
        )));
    }
    if approx_scale == 0 {
        return Err(LabError::Domain("approximation scale must be ≥ 1".into()));
    }
    if gamma == 2.0 {
        sample_spine_lattice(r_max, approx_scale, seed, step_budget)
    } else {
        sample_spine_stable(gamma, r_max, approx_scale, seed, step_budget)
    }
}

/// γ = 2 route: deterministic U = 2r, two censored trees per lattice point.
fn sample_spine_lattice(
    r_max: f64,
    p: u32,
    seed: u64,
    step_budget: u64,
) -> Result<SpineSample> {
    let pf = f64::from(p);
    let edge = 1.0 / pf;
    let vertex_mass = 1.0 / (pf * pf);
    let levels = (pf * r_max + 1e-9).floor() as u32;
    if levels == 0 {
        return Err(LabError::Domain(format!(
            "r_max = {r_max} is below one lattice edge 1/p = {edge}; raise the scale"
        )));
    }
    let mut pool = CoinPool::new(stream(seed, 0));
    let mut budget = step_budget;
    let mut decorations = Vec::with_capacity(2 * levels as usize);
    // Mass entering each absolute lattice level 1..=levels.
    let mut level_mass = vec![0.0f64; levels as usize + 1];
    let mut s_increment = vec![0.0f64; levels as usize + 1];
    for k in 1..=levels {
        let ceiling = levels - k;
        for _twin in 0..2 {
            let mut counts = vec![0u64; ceiling as usize + 1];
            ceiling_walk_census(ceiling, &mut pool, &mut budget, &mut counts)?;
            let mut cum = 0.0;
            let profile: Vec<(f64, f64)> = counts
                .iter()
                .enumerate()
                .map(|(d, &c)| {
                    cum += c as f64 * vertex_mass;
                    (d as f64 * edge, cum)
                })
                .collect();
            for (d, &c) in counts.iter().enumerate() {
                level_mass[k as usize + d] += c as f64 * vertex_mass;
            }
            s_increment[k as usize] += cum;
            decorations.push(SpineDecoration {
                position: f64::from(k) * edge,
                lifetime: cum,
                profile,
            });
        }
    }
    let mut radii = Vec::with_capacity(levels as usize + 1);
    let mut m_star = Vec::with_capacity(levels as usize + 1);
    let mut s_r = Vec::with_capacity(levels as usize + 1);
    let (mut m_acc, mut s_acc) = (0.0f64, 0.0f64);
    for j in 0..=levels as usize {
        m_acc += level_mass[j];
        s_acc += s_increment[j];
        radii.push(j as f64 * edge);
        m_star.push(m_acc);
        s_r.push(s_acc);
    }
    Ok(SpineSample {
        r_max,
        approximation_scale: p,
        drift: 2.0,
        jumps: Vec::new(),
        decorations,
        radii,
        m_star,
        s_r,
    })
}

/// γ ∈ (1, 2) route: truncated stable U, offspring-walk decorations.
fn sample_spine_stable(
    gamma: f64,
    r_max: f64,
    p: u32,
    seed: u64,
    step_budget: u64,
) -> Result<SpineSample> {
    let mech = BranchingMechanism::stable(gamma)?;
    let jump_part = sample_height_jump_process(&mech, r_max, seed)?;
    let mut rng = stream(seed, 1);
    let law = OffspringLaw::new(gamma)?;
    let pf = f64::from(p);
    let b_p = pf.powf(1.0 / gamma);
    let time_scale = 1.0 / (pf * b_p);
    let space_scale = b_p / pf;
    // Decorations per unit of dU mass at scale p.
    let deco_rate = b_p;

    // Graft points: each jump spawns Poisson(size·rate) decorations at its
    // position; the drift part spreads Poisson(drift·r_max·rate) uniformly.
    let mut graft_points: Vec<f64> = Vec::new();
    for jump in &jump_part.jumps {
        let n = poisson_count(jump.size * deco_rate, &mut rng)?;
        graft_points.extend(std::iter::repeat(jump.position).take(n));
    }
    let n_drift = poisson_count(jump_part.drift * r_max * deco_rate, &mut rng)?;
    graft_points.extend((0..n_drift).map(|_| rng.gen::<f64>() * r_max));
    graft_points.sort_by(f64::total_cmp);

    let mut budget = step_budget;
    let mut decorations = Vec::with_capacity(graft_points.len());
    for &position in &graft_points {
        // One offspring-walk excursion; every step draws on the budget.
        let mut steps: Vec<i64> = Vec::new();
        let mut s: i64 = 0;
        loop {
            if budget == 0 {
                return Err(LabError::BudgetExhausted(format!(
                    "spine decoration step budget exhausted after {} decorations",
                    decorations.len()
                )));
            }
            budget -= 1;
            let step = law.sample_step(&mut rng);
            steps.push(step);
            s += step;
            if s < 0 {
                break;
            }
        }
        let heights = discrete_height(&steps)?;
        let max_h = heights.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0u64; max_h + 1];
        for &h in &heights[..heights.len() - 1] {
            counts[h as usize] += 1;
        }
        let mut cum = 0.0;
        let profile: Vec<(f64, f64)> = counts
            .iter()
            .enumerate()
            .map(|(d, &c)| {
                cum += c as f64 * time_scale;
                (d as f64 * space_scale, cum)
            })
            .collect();
        decorations.push(SpineDecoration {
            position,
            lifetime: cum,
            profile,
        });
    }

    // Assemble M* and S on a uniform 64-cell grid by bucketing masses at
    // the smallest grid radius that sees them.
    let cells = 64usize;
    let h = r_max / cells as f64;
    // Grid index of the smallest radius ≥ x; masses at height 0 would sit
    // at graft points of height exactly 0, which have probability zero, so
    // the clamp below only protects the M*_0 = 0 invariant from rounding.
    let bucket = |x: f64| -> usize { ((x / h).ceil() as usize).clamp(1, cells) };
    let mut m_bucket = vec![0.0f64; cells + 1];
    let mut s_bucket = vec![0.0f64; cells + 1];
    for deco in &decorations {
        s_bucket[bucket(deco.position)] += deco.lifetime;
        let mut prev = 0.0;
        for &(offset, cum) in &deco.profile {
            let absolute = deco.position + offset;
            if absolute <= r_max {
                m_bucket[bucket(absolute)] += cum - prev;
            }
            prev = cum;
        }
    }
    let mut radii = Vec::with_capacity(cells + 1);
    let mut m_star = Vec::with_capacity(cells + 1);
    let mut s_r = Vec::with_capacity(cells + 1);
    let (mut m_acc, mut s_acc) = (0.0f64, 0.0f64);
    for j in 0..=cells {
        m_acc += m_bucket[j];
        s_acc += s_bucket[j];
        radii.push(j as f64 * h);
        m_star.push(m_acc);
        s_r.push(s_acc);
    }
    Ok(SpineSample {
        r_max,
        approximation_scale: p,
        drift: jump_part.drift,
        jumps: jump_part.jumps,
        decorations,
        radii,
        m_star,
        s_r,
    })
}

fn poisson_count<R: Rng>(rate: f64, rng: &mut R) -> Result<usize> {
    if rate == 0.0 {
        return Ok(0);
    }
    Ok(Poisson::new(rate)
        .map_err(|e| LabError::Domain(format!("decoration rate {rate}: {e}")))?
        .sample(rng) as usize)
}

/// Exact finite-scale value of E[e^{−λ M*_r}] on the γ = 2 lattice with
/// `levels` = pr lattice points at scale p, two trees per point:
/// Π_{L=0}^{levels−1} h_L² with h_0 = w = e^{−λ/p²} and h_L = w/(2 − h_{L−1}).
pub fn spine_mass_laplace_oracle(scale_p: u32, levels: u32, lambda: f64) -> f64 {
    let w = (-lambda / f64::from(scale_p).powi(2)).exp();
    let mut h = w;
    let mut product = 1.0;
    for _ in 0..levels {
        product *= h * h;
        h = w / (2.0 - h);
    }
    product
}

/// Monte Carlo row for the spine Laplace identity at γ = 2.
#[derive(Debug, Clone)]
pub struct SpineLaplaceRow {
    pub r: f64,
    pub lambda: f64,
    pub scale_p: u32,
    pub reps: u32,
    /// Sample mean of e^{−λM*_r} and its standard error.
    pub mc_mean: f64,
    pub mc_se: f64,
    /// Exact mean at this finite scale (product oracle).
    pub finite_scale_oracle: f64,
    /// Continuum target e^{αr}·𝓛_r(λ).
    pub target: f64,
}

/// Estimate E[e^{−λM*_r}] by direct censored-walk replication and compare
/// against both the finite-scale product oracle and the continuum kernel
/// value. Replicate i draws from stream(seed, i), so the estimate does not
/// depend on scheduling.
pub fn spine_laplace_row(
    mech: &BranchingMechanism,
    r: f64,
    lambda: f64,
    scale_p: u32,
    reps: u32,
    seed: u64,
) -> Result<SpineLaplaceRow> {
    match mech.measure {
        LevyMeasure::StableTail { gamma }
            if gamma == 2.0 && mech.alpha == 0.0 && mech.beta == 0.0 => {}
        _ => {
            return Err(LabError::UnsupportedExponent(
                "the lattice Laplace estimate is exact only for the quadratic \
                 mechanism"
                    .into(),
            ))
        }
    }
    if reps < 2 {
        return Err(LabError::Domain("need at least 2 replicates".into()));
    }
    let pf = f64::from(scale_p);
    let levels_f = pf * r;
    let levels = levels_f.round();
    if (levels_f - levels).abs() > 1e-9 || levels < 1.0 {
        return Err(LabError::Domain(format!(
            "p·r = {levels_f} must be a positive integer for the lattice grid"
        )));
    }
    let levels = levels as u32;
    let vertex_mass = 1.0 / (pf * pf);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for i in 0..reps {
        let mut pool = CoinPool::new(stream(seed, u64::from(i)));
        let mut vertices = 0u64;
        for ceiling in 0..levels {
            vertices += ceiling_walk_total(ceiling, &mut pool);
            vertices += ceiling_walk_total(ceiling, &mut pool);
        }
        let draw = (-lambda * vertices as f64 * vertex_mass).exp();
        sum += draw;
        sumsq += draw * draw;
    }
    let n = f64::from(reps);
    let mc_mean = sum / n;
    let var = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
    let target = (mech.alpha * r).exp() * script_l(mech, r, lambda)?.value;
    Ok(SpineLaplaceRow {
        r,
        lambda,
        scale_p,
        reps,
        mc_mean,
        mc_se: (var / n).sqrt(),
        finite_scale_oracle: spine_mass_laplace_oracle(scale_p, levels, lambda),
        target,
    })
}
