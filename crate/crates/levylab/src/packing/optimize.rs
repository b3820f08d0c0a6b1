//! Packing-value optimizers and the pre-measure / mass probes built on
//! them.
//!
//! A packing instance is a maximum-weight independent-set problem: one
//! candidate per (center, radius) pair, weight g(radius), conflicts
//! whenever d(xᵢ,xⱼ) ≤ rᵢ + rⱼ (same-center pairs conflict through d = 0).
//! The exact solver is a branch-and-bound over at most 64 candidates with
//! bitmask adjacency; the greedy solver scales to thousands of points and
//! is a certified lower bound.

use crate::error::{LabError, Result};
use crate::packing::instance::{
    validate_packing, PackingEstimate, PackingGauge, PackingInstance, PackingMethod,
};
use crate::realtree::CodedTree;

/// Largest candidate count the exact solver accepts.
pub const EXACT_PAIR_CAP: usize = 64;

/// Dyadic levels per ε used when probes build their own radius grids.
const DYADIC_DEPTH: u32 = 6;

/// Dyadic radius grid ε, ε/2, …, ε/2^{depth−1} (decreasing).
pub fn dyadic_radii(epsilon: f64, depth: u32) -> Vec<f64> {
    (0..depth).map(|i| epsilon / f64::powi(2.0, i as i32)).collect()
}

struct Candidates {
    /// Sorted by weight descending (ties: center then larger radius).
    weight: Vec<f64>,
    center: Vec<usize>,
    radius: Vec<f64>,
}

fn build_candidates(instance: &PackingInstance) -> Result<Candidates> {
    let mut triples = Vec::with_capacity(instance.n_pairs());
    for (i, _) in instance.points().iter().enumerate() {
        for &r in instance.radius_grid() {
            triples.push((instance.gauge().eval(r)?, i, r));
        }
    }
    triples.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(b.2.total_cmp(&a.2))
    });
    Ok(Candidates {
        weight: triples.iter().map(|t| t.0).collect(),
        center: triples.iter().map(|t| t.1).collect(),
        radius: triples.iter().map(|t| t.2).collect(),
    })
}

fn conflict(instance: &PackingInstance, c: &Candidates, a: usize, b: usize) -> bool {
    instance.distance(c.center[a], c.center[b]) <= c.radius[a] + c.radius[b]
}

/// Depth-first branch and bound on the candidate bitmask. `free` holds the
/// candidates still admissible; the bound is the total free weight.
fn bound_and_branch(
    weight: &[f64],
    adj: &[u64],
    free: u64,
    current: f64,
    chosen: u64,
    best: &mut (f64, u64),
) {
    if free == 0 {
        if current > best.0 {
            *best = (current, chosen);
        }
        return;
    }
    let mut bound = current;
    let mut rest = free;
    while rest != 0 {
        bound += weight[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    if bound <= best.0 {
        return;
    }
    // Highest-weight free candidate first: include, then exclude.
    let pivot = free.trailing_zeros() as usize;
    let bit = 1u64 << pivot;
    bound_and_branch(
        weight,
        adj,
        free & !bit & !adj[pivot],
        current + weight[pivot],
        chosen | bit,
        best,
    );
    bound_and_branch(weight, adj, free & !bit, current, chosen, best);
}

/// Exact optimum of Σ g(rᵢ) over strictly disjoint ball families.
///
/// Errors when the instance exceeds [`EXACT_PAIR_CAP`] candidate pairs;
/// use [`packing_value_greedy`] there.
pub fn packing_value_exact(instance: &PackingInstance) -> Result<PackingEstimate> {
    let m = instance.n_pairs();
    if m > EXACT_PAIR_CAP {
        return Err(LabError::Domain(format!(
            "{m} candidate pairs exceed the exact cap {EXACT_PAIR_CAP}; \
             use the greedy optimizer"
        )));
    }
    let cands = build_candidates(instance)?;
    let mut adj = vec![0u64; m];
    for a in 0..m {
        for b in a + 1..m {
            if conflict(instance, &cands, a, b) {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
    }
    let full = if m == 64 { !0u64 } else { (1u64 << m) - 1 };
    let mut best = (0.0f64, 0u64);
    bound_and_branch(&cands.weight, &adj, full, 0.0, 0, &mut best);
    let mut balls = Vec::new();
    let mut mask = best.1;
    while mask != 0 {
        let k = mask.trailing_zeros() as usize;
        balls.push((instance.points()[cands.center[k]], cands.radius[k]));
        mask &= mask - 1;
    }
    validate_packing(instance, &balls)?;
    Ok(PackingEstimate {
        value: best.0,
        balls,
        method: PackingMethod::Exact,
        gap: Some(0.0),
    })
}

/// Greedy lower bound: admit candidates by weight descending under the
/// strict disjointness test. Always ≤ the exact optimum.
pub fn packing_value_greedy(instance: &PackingInstance) -> Result<PackingEstimate> {
    let cands = build_candidates(instance)?;
    let mut picked: Vec<usize> = Vec::new();
    let mut value = 0.0;
    'next: for k in 0..cands.weight.len() {
        for &p in &picked {
            if conflict(instance, &cands, p, k) {
                continue 'next;
            }
        }
        picked.push(k);
        value += cands.weight[k];
    }
    let balls: Vec<(f64, f64)> = picked
        .iter()
        .map(|&k| (instance.points()[cands.center[k]], cands.radius[k]))
        .collect();
    validate_packing(instance, &balls)?;
    Ok(PackingEstimate {
        value,
        balls,
        method: PackingMethod::Greedy,
        gap: None,
    })
}

/// Exact when under the candidate cap, greedy beyond it.
pub fn packing_value_auto(instance: &PackingInstance) -> Result<PackingEstimate> {
    if instance.n_pairs() <= EXACT_PAIR_CAP {
        packing_value_exact(instance)
    } else {
        packing_value_greedy(instance)
    }
}

/// 𝒫^{(ε)} along a decreasing ε-sequence: for each ε the packing value of
/// the sampled point set with a dyadic radius grid inside (0, ε]. The
/// admissible families shrink with ε, so exact values are nonincreasing.
pub fn pre_measure_estimate(
    tree: &CodedTree,
    times: &[f64],
    gauge: &PackingGauge,
    eps_sequence: &[f64],
) -> Result<Vec<(f64, PackingEstimate)>> {
    if eps_sequence.is_empty() {
        return Err(LabError::Domain("need at least one epsilon".into()));
    }
    for w in eps_sequence.windows(2) {
        if !(w[1] < w[0]) {
            return Err(LabError::Domain(
                "epsilon sequence must be strictly decreasing".into(),
            ));
        }
    }
    let mut out = Vec::with_capacity(eps_sequence.len());
    for &eps in eps_sequence {
        let grid = dyadic_radii(eps, DYADIC_DEPTH);
        let instance = PackingInstance::from_tree(tree, times, gauge.clone(), eps, grid)?;
        out.push((eps, packing_value_auto(&instance)?));
    }
    Ok(out)
}

/// One row of the packing-vs-mass table.
#[derive(Debug, Clone)]
pub struct IntervalRatio {
    pub interval: (f64, f64),
    /// 𝒫^{(ε)} estimate of the sampled subtree points (NaN when skipped).
    pub packing: f64,
    /// m-mass of the interval (grid count × dt).
    pub mass: f64,
    pub ratio: f64,
    pub method: PackingMethod,
    /// Reason the row was excluded from the constancy statistic, if any.
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RatioTable {
    pub rows: Vec<IntervalRatio>,
    /// max/min of the valid ratios (NaN when fewer than one valid row).
    pub constancy: f64,
}

/// Packing-vs-mass proportionality probe: for each interval of coding
/// time, estimate 𝒫^{(ε)} on an evenly strided subsample of its grid
/// points and compare with its m-mass. Intervals are half-open [a, b) on
/// the grid, so a partition of [0, ζ] has masses summing to n·dt.
pub fn packing_vs_mass(
    tree: &CodedTree,
    intervals: &[(f64, f64)],
    gauge: &PackingGauge,
    epsilon: f64,
) -> Result<RatioTable> {
    packing_vs_mass_with(tree, intervals, gauge, epsilon, 410)
}

/// As [`packing_vs_mass`], with an explicit cap on subsampled points per
/// interval (small caps keep instances under the exact-solver limit).
pub fn packing_vs_mass_with(
    tree: &CodedTree,
    intervals: &[(f64, f64)],
    gauge: &PackingGauge,
    epsilon: f64,
    max_points: usize,
) -> Result<RatioTable> {
    if max_points == 0 {
        return Err(LabError::Domain("max_points must be ≥ 1".into()));
    }
    let dt = tree.path().dt();
    let n = tree.n();
    let zeta = tree.path().zeta();
    let mut sorted: Vec<(f64, f64)> = intervals.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[1].0 < w[0].1 - 1e-12 {
            return Err(LabError::Domain(format!(
                "intervals [{}, {}) and [{}, {}) overlap",
                w[0].0, w[0].1, w[1].0, w[1].1
            )));
        }
    }
    for &(a, b) in intervals {
        if !(a >= -1e-12 && b <= zeta + dt) {
            return Err(LabError::Domain(format!(
                "interval [{a}, {b}) leaves [0, ζ = {zeta}]"
            )));
        }
    }
    let grid = dyadic_radii(epsilon, DYADIC_DEPTH);
    let mut rows = Vec::with_capacity(intervals.len());
    for &(a, b) in intervals {
        let i0 = (a / dt).ceil() as usize;
        let i1 = ((b / dt).ceil() as usize).min(n);
        let count = i1.saturating_sub(i0);
        let mass = count as f64 * dt;
        if b <= a || count < 2 {
            rows.push(IntervalRatio {
                interval: (a, b),
                packing: f64::NAN,
                mass,
                ratio: f64::NAN,
                method: PackingMethod::Greedy,
                note: Some(format!("degenerate interval: {count} grid points")),
            });
            continue;
        }
        let stride = count.div_ceil(max_points).max(1);
        let times: Vec<f64> = (i0..i1).step_by(stride).map(|i| i as f64 * dt).collect();
        let instance =
            PackingInstance::from_tree(tree, &times, gauge.clone(), epsilon, grid.clone())?;
        let est = packing_value_auto(&instance)?;
        rows.push(IntervalRatio {
            interval: (a, b),
            packing: est.value,
            ratio: est.value / mass,
            mass,
            method: est.method,
            note: None,
        });
    }
    let valid: Vec<f64> = rows
        .iter()
        .filter(|r| r.note.is_none())
        .map(|r| r.ratio)
        .collect();
    let constancy = if valid.is_empty() {
        f64::NAN
    } else {
        let max = valid.iter().copied().fold(f64::MIN, f64::max);
        let min = valid.iter().copied().fold(f64::MAX, f64::min);
        max / min
    };
    Ok(RatioTable { rows, constancy })
}
