//! Trees coded by excursion paths: pseudometric, ball masses, local-time
//! counts, leaf detection, and the four-points inequality.
//!
//! The tree is never materialized as nodes and edges. Every quantity is
//! read off the coding path h on its uniform grid: d(s,t) = h(s) + h(t)
//! − 2·min h over [s∧t, s∨t], the mass measure is dt per grid time, and
//! levels/balls/leaves are grid scans. The grid *is* the space.

mod io;
mod rmq;

pub use rmq::RangeMin;

use crate::error::{LabError, Result};

/// Where a path came from; informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathOrigin {
    Simulated,
    Synthetic,
}

/// A nonnegative path on a uniform grid with h(0) = h(ζ) = 0.
#[derive(Debug, Clone)]
pub struct ExcursionPath {
    samples: Vec<f64>,
    dt: f64,
    origin: PathOrigin,
}

impl ExcursionPath {
    pub fn new(samples: Vec<f64>, dt: f64, origin: PathOrigin) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(LabError::Domain(format!("grid step must be positive, got {dt}")));
        }
        if samples.len() < 2 {
            return Err(LabError::Domain("path needs at least two samples".into()));
        }
        if samples.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(LabError::Domain("path samples must be finite and ≥ 0".into()));
        }
        if samples[0] != 0.0 || *samples.last().unwrap() != 0.0 {
            return Err(LabError::Domain("path must start and end at 0".into()));
        }
        if samples.iter().all(|&x| x == 0.0) {
            return Err(LabError::Domain("constant-zero path codes no tree".into()));
        }
        Ok(Self { samples, dt, origin })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn origin(&self) -> PathOrigin {
        self.origin
    }

    /// Lifetime ζ = (n − 1)·dt.
    pub fn zeta(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn max_height(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }
}

/// Count of upcrossing intervals at a level, normalized by v(ε).
#[derive(Debug, Clone, Copy)]
pub struct LocalTimeEstimate {
    pub level: f64,
    pub epsilon: f64,
    /// Number of excursion intervals of h above `level` whose maximum
    /// reaches level + ε.
    pub count: u64,
    pub v_eps: f64,
    /// count / v_eps.
    pub value: f64,
}

/// An excursion path with its range-minimum index: the coded real tree.
#[derive(Debug, Clone)]
pub struct CodedTree {
    path: ExcursionPath,
    rmq: RangeMin,
}

/// Builds the coded tree (range-minimum preprocessing) from a path.
pub fn code_tree(path: ExcursionPath) -> Result<CodedTree> {
    let rmq = RangeMin::new(path.samples.clone());
    Ok(CodedTree { path, rmq })
}

impl CodedTree {
    pub fn path(&self) -> &ExcursionPath {
        &self.path
    }

    pub fn n(&self) -> usize {
        self.path.samples.len()
    }

    fn h(&self, i: usize) -> f64 {
        self.path.samples[i]
    }

    /// Maps a grid time to its index, rejecting out-of-range times.
    fn index_of(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0) || t > self.path.zeta() + 0.5 * self.path.dt {
            return Err(LabError::Domain(format!(
                "time {t} outside [0, {}]",
                self.path.zeta()
            )));
        }
        let i = (t / self.path.dt).round() as usize;
        Ok(i.min(self.n() - 1))
    }

    /// d between two grid indices.
    pub fn distance_idx(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        self.h(i) + self.h(j) - 2.0 * self.rmq.min(i, j)
    }

    /// d(s, t) for grid times.
    pub fn tree_distance(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.distance_idx(self.index_of(s)?, self.index_of(t)?))
    }

    /// Mass of the closed ball of radius r around the point coded by
    /// grid time t: dt · #{grid s : d(s, t) ≤ r}.
    pub fn ball_mass(&self, t: f64, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(LabError::Domain(format!("radius must be ≥ 0, got {r}")));
        }
        Ok(self.ball_mass_idx(self.index_of(t)?, r))
    }

    /// Ball mass around a grid index, via two running-minimum sweeps
    /// (O(n), no range queries).
    pub fn ball_mass_idx(&self, c: usize, r: f64) -> f64 {
        let h = &self.path.samples;
        let hc = h[c];
        let mut count = 0usize;
        // Leftward sweep: running min of h over [s, c].
        let mut m = f64::INFINITY;
        for s in (0..=c).rev() {
            m = m.min(h[s]);
            if h[s] + hc - 2.0 * m <= r {
                count += 1;
            }
        }
        // Rightward sweep over (c, n).
        m = hc;
        for s in c + 1..h.len() {
            m = m.min(h[s]);
            if h[s] + hc - 2.0 * m <= r {
                count += 1;
            }
        }
        count as f64 * self.path.dt
    }

    /// Mass of {h ≤ r}: equals ball_mass at the root (t = 0).
    pub fn root_ball_mass(&self, r: f64) -> f64 {
        let count = self.path.samples.iter().filter(|&&x| x <= r).count();
        count as f64 * self.path.dt
    }

    /// Counts excursion intervals of h above `level` that reach
    /// level + ε, normalized by the caller-supplied v(ε).
    pub fn local_time_estimate(
        &self,
        level: f64,
        epsilon: f64,
        v_eps: f64,
    ) -> Result<LocalTimeEstimate> {
        if !(level >= 0.0) || !(epsilon > 0.0) || !(v_eps > 0.0) {
            return Err(LabError::Domain(format!(
                "need level ≥ 0, ε > 0, v_eps > 0; got {level}, {epsilon}, {v_eps}"
            )));
        }
        let mut count = 0u64;
        let mut above = false;
        let mut reached = false;
        for &x in &self.path.samples {
            if x > level {
                above = true;
                if x >= level + epsilon {
                    reached = true;
                }
            } else if above {
                if reached {
                    count += 1;
                }
                above = false;
                reached = false;
            }
        }
        if above && reached {
            count += 1;
        }
        Ok(LocalTimeEstimate {
            level,
            epsilon,
            count,
            v_eps,
            value: count as f64 / v_eps,
        })
    }

    /// The four-points inequality at a quadruple of grid times:
    /// d₁₂ + d₃₄ ≤ max(d₁₃ + d₂₄, d₁₄ + d₂₃) + 1e−12.
    pub fn four_point_check(&self, times: [f64; 4]) -> Result<bool> {
        let mut idx = [0usize; 4];
        for (k, &t) in times.iter().enumerate() {
            idx[k] = self.index_of(t)?;
        }
        Ok(self.four_point_check_idx(idx))
    }

    pub fn four_point_check_idx(&self, idx: [usize; 4]) -> bool {
        let d = |a: usize, b: usize| self.distance_idx(idx[a], idx[b]);
        let s12 = d(0, 1) + d(2, 3);
        let s13 = d(0, 2) + d(1, 3);
        let s14 = d(0, 3) + d(1, 2);
        s12 <= s13.max(s14) + 1e-12
    }

    /// Grid leaf test: both one-sided minima over [t−ε, t] and [t, t+ε]
    /// must dip strictly below h(t).
    pub fn is_leaf_time(&self, t: f64, epsilon: f64) -> Result<bool> {
        let zeta = self.path.zeta();
        if !(t > 0.0 && t < zeta) {
            return Err(LabError::Domain(format!("interior time required, got {t}")));
        }
        if !(epsilon > 0.0 && epsilon < t.min(zeta - t)) {
            return Err(LabError::Domain(format!(
                "need 0 < ε < min(t, ζ−t), got ε = {epsilon}"
            )));
        }
        let i = self.index_of(t)?;
        let w = (epsilon / self.path.dt).round() as usize;
        let hi_val = self.h(i);
        let left = self.rmq.min(i - w, i);
        let right = self.rmq.min(i, i + w);
        Ok(left < hi_val && right < hi_val)
    }
}
