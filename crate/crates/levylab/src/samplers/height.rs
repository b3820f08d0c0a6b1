//! Offspring laws and the walk → height-process transform.
//!
//! A downward-skip-free walk S (steps ≥ −1) codes a planted forest: the
//! height of the n-th vertex is the number of weak suffix minima strictly
//! before n,
//!
//! ```text
//!     H_n = #{0 ≤ j < n : S_j = min_{j ≤ k ≤ n} S_k}.
//! ```
//!
//! The transform runs in O(n) amortized with a stack of the surviving
//! suffix-minima values. Offspring distributions live here too: the critical
//! stable family f(s) = s + (1−s)^γ/γ for γ ∈ (1,2), and Geometric(1/2)
//! (p_k = 2^{−(k+1)}) at γ = 2, where f collapses to 1/(2−s).

use crate::error::{LabError, Result};
use rand::Rng;

/// Height process of a downward-skip-free walk.
///
/// Returns H_0..H_n (one more entry than there are steps). Steps below −1
/// are rejected: they would break the bijection between walks and forests.
pub fn discrete_height(steps: &[i64]) -> Result<Vec<u64>> {
    let mut heights = Vec::with_capacity(steps.len() + 1);
    // Values S_j that are still weak minima of some suffix, increasing j,
    // nondecreasing values. Popping keeps the count exact: S_j survives a new
    // point s iff S_j ≤ s, and survivors stay ≤ everything between.
    let mut stack: Vec<i64> = Vec::with_capacity(64);
    let mut s: i64 = 0;
    heights.push(0);
    stack.push(0);
    for &step in steps {
        if step < -1 {
            return Err(LabError::Domain(format!(
                "walk step {step} < -1 breaks the downward-skip-free coding"
            )));
        }
        s += step;
        while let Some(&top) = stack.last() {
            if top > s {
                stack.pop();
            } else {
                break;
            }
        }
        heights.push(stack.len() as u64);
        stack.push(s);
    }
    Ok(heights)
}

/// Critical offspring distribution attracted to the γ-stable law.
///
/// Generating function f(s) = s + (1−s)^γ/γ, so p_0 = 1/γ, p_1 = 0,
/// p_2 = (γ−1)/2 and p_{k+1} = p_k (k−γ)/(k+1) afterwards. At γ = 2 the
/// formula degenerates; the law used there is Geometric(1/2), p_k = 2^{−(k+1)},
/// whose walk has the exact simple-random-walk height process. Both have
/// mean exactly 1.
#[derive(Debug, Clone, Copy)]
pub struct OffspringLaw {
    gamma: f64,
}

impl OffspringLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma <= 2.0) {
            return Err(LabError::Domain(format!(
                "offspring stability index {gamma} outside (1, 2]"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// P(ξ = k), by the closed recurrence.
    pub fn pmf(&self, k: usize) -> f64 {
        let g = self.gamma;
        if g == 2.0 {
            return 0.5f64.powi(k as i32 + 1);
        }
        match k {
            0 => 1.0 / g,
            1 => 0.0,
            _ => {
                let mut term = (g - 1.0) * 0.5;
                for j in 2..k {
                    term *= (j as f64 - g) / (j as f64 + 1.0);
                }
                term
            }
        }
    }

    /// Draw one offspring count.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        if self.gamma == 2.0 {
            // Geometric(1/2) from raw bits: trailing ones of a uniform word
            // have exactly the law P(k) = 2^{−(k+1)}; chaining words covers
            // the (astronomically rare) k ≥ 64 tail without bias.
            let mut k = 0u64;
            loop {
                let t = rng.next_u64().trailing_ones();
                k += u64::from(t);
                if t < 64 {
                    return k;
                }
            }
        }
        // Sequential inversion of the cdf; the term recurrence keeps each
        // additional candidate O(1). The loop ends on its own when the
        // partial cdf stops moving in f64 — beyond that point the uniform
        // draw cannot distinguish outcomes anyway.
        let g = self.gamma;
        let u: f64 = rng.gen();
        let mut cum = 1.0 / g;
        if u < cum {
            return 0;
        }
        let mut k = 2u64;
        let mut term = (g - 1.0) * 0.5;
        loop {
            let next = cum + term;
            if u < next || next == cum {
                return k;
            }
            cum = next;
            term *= (k as f64 - g) / (k as f64 + 1.0);
            k += 1;
        }
    }

    /// Draw one walk step ξ − 1 ∈ {−1, 0, 1, ...}.
    pub fn sample_step<R: Rng>(&self, rng: &mut R) -> i64 {
        self.sample(rng) as i64 - 1
    }
}
