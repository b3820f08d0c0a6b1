//! Finite packing instances: a point set with a metric, a gauge, and an
//! admissible radius grid.

use crate::error::{LabError, Result};
use crate::mechanism::GaugeFunction;
use crate::realtree::CodedTree;

/// Weight function g(r) for packing values Σ g(rᵢ).
///
/// Either the mechanism gauge itself or a finite table for toy instances;
/// a table is evaluated only at its own abscissae, so a grid mismatch is
/// an error rather than a silent interpolation.
#[derive(Debug, Clone)]
pub enum PackingGauge {
    Mechanism(GaugeFunction),
    Table(Vec<(f64, f64)>),
}

impl PackingGauge {
    /// Toy linear gauge g(r) = slope · r tabulated on the given radii.
    pub fn linear(radii: &[f64], slope: f64) -> Self {
        PackingGauge::Table(radii.iter().map(|&r| (r, slope * r)).collect())
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        match self {
            PackingGauge::Mechanism(g) => g.eval(r),
            PackingGauge::Table(rows) => rows
                .iter()
                .find(|&&(x, _)| (x - r).abs() <= 1e-12 * x.abs().max(1.0))
                .map(|&(_, v)| v)
                .ok_or_else(|| {
                    LabError::Domain(format!("radius {r} is not tabulated in the toy gauge"))
                }),
        }
    }
}

/// A finite ε-packing problem: maximize Σ g(rᵢ) over balls with centers in
/// the point set, radii from the grid, pairwise d(xᵢ,xⱼ) > rᵢ + rⱼ.
#[derive(Debug, Clone)]
pub struct PackingInstance {
    labels: Vec<f64>,
    /// Upper-triangular pairwise distances, row-major (i < j).
    dist: Vec<f64>,
    gauge: PackingGauge,
    epsilon: f64,
    radius_grid: Vec<f64>,
}

fn check_radius_grid(epsilon: f64, radius_grid: &[f64]) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LabError::Domain(format!(
            "epsilon must be positive finite, got {epsilon}"
        )));
    }
    if radius_grid.is_empty() {
        return Err(LabError::Domain("radius grid must be nonempty".into()));
    }
    for w in radius_grid.windows(2) {
        if !(w[1] < w[0]) {
            return Err(LabError::Domain(
                "radius grid must be strictly decreasing".into(),
            ));
        }
    }
    for &r in radius_grid {
        if !(r > 0.0 && r <= epsilon) {
            return Err(LabError::Domain(format!(
                "radius {r} outside (0, epsilon = {epsilon}]"
            )));
        }
    }
    Ok(())
}

impl PackingInstance {
    fn build(
        labels: Vec<f64>,
        dist: Vec<f64>,
        gauge: PackingGauge,
        epsilon: f64,
        radius_grid: Vec<f64>,
    ) -> Result<Self> {
        check_radius_grid(epsilon, &radius_grid)?;
        if labels.iter().any(|x| !x.is_finite()) {
            return Err(LabError::Domain("points must be finite".into()));
        }
        Ok(PackingInstance {
            labels,
            dist,
            gauge,
            epsilon,
            radius_grid,
        })
    }

    /// Points on the real line with the absolute-value metric.
    pub fn on_line(
        coords: &[f64],
        gauge: PackingGauge,
        epsilon: f64,
        radius_grid: Vec<f64>,
    ) -> Result<Self> {
        let n = coords.len();
        let mut dist = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in i + 1..n {
                dist.push((coords[i] - coords[j]).abs());
            }
        }
        Self::build(coords.to_vec(), dist, gauge, epsilon, radius_grid)
    }

    /// Grid times on a coded tree with the tree metric.
    pub fn from_tree(
        tree: &CodedTree,
        times: &[f64],
        gauge: PackingGauge,
        epsilon: f64,
        radius_grid: Vec<f64>,
    ) -> Result<Self> {
        let n = times.len();
        let mut dist = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
        for i in 0..n {
            for j in i + 1..n {
                dist.push(tree.tree_distance(times[i], times[j])?);
            }
        }
        Self::build(times.to_vec(), dist, gauge, epsilon, radius_grid)
    }

    pub fn points(&self) -> &[f64] {
        &self.labels
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn radius_grid(&self) -> &[f64] {
        &self.radius_grid
    }

    pub fn gauge(&self) -> &PackingGauge {
        &self.gauge
    }

    /// Number of (center, radius) candidates the optimizers see.
    pub fn n_pairs(&self) -> usize {
        self.labels.len() * self.radius_grid.len()
    }

    pub(crate) fn distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let n = self.labels.len();
        // Row offset of a: a·n − a(a+1)/2, then column b − a − 1.
        self.dist[a * n - a * (a + 1) / 2 + (b - a - 1)]
    }
}

/// A packing found by one of the optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMethod {
    Exact,
    Greedy,
}

#[derive(Debug, Clone)]
pub struct PackingEstimate {
    /// Σ g(rᵢ) over the chosen balls.
    pub value: f64,
    /// Chosen (center label, radius) pairs.
    pub balls: Vec<(f64, f64)>,
    pub method: PackingMethod,
    /// Distance to a proven upper bound, when one exists (0 for exact).
    pub gap: Option<f64>,
}

/// Post-hoc certificate: centers belong to the instance, radii to the
/// grid, and every pair of balls is strictly disjoint (d > rᵢ + rⱼ).
pub fn validate_packing(instance: &PackingInstance, balls: &[(f64, f64)]) -> Result<()> {
    let mut idx = Vec::with_capacity(balls.len());
    for &(center, radius) in balls {
        let i = instance
            .labels
            .iter()
            .position(|&x| x == center)
            .ok_or_else(|| {
                LabError::Domain(format!("ball center {center} is not an instance point"))
            })?;
        if !instance.radius_grid.contains(&radius) {
            return Err(LabError::Domain(format!(
                "ball radius {radius} is not on the admissible grid"
            )));
        }
        idx.push((i, radius));
    }
    for (a, &(i, ri)) in idx.iter().enumerate() {
        for &(j, rj) in &idx[a + 1..] {
            let d = instance.distance(i, j);
            if !(d > ri + rj) {
                return Err(LabError::Domain(format!(
                    "balls at {} and {} overlap: d = {d} ≤ {ri} + {rj}",
                    instance.labels[i], instance.labels[j]
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realtree::{code_tree, ExcursionPath, PathOrigin};

    fn toy(radii: &[f64]) -> PackingGauge {
        PackingGauge::linear(radii, 1.0)
    }

    #[test]
    fn construction_guards() {
        let g = toy(&[0.2]);
        assert!(PackingInstance::on_line(&[0.0], g.clone(), 0.4, vec![]).is_err());
        assert!(PackingInstance::on_line(&[0.0], g.clone(), 0.0, vec![0.2]).is_err());
        assert!(PackingInstance::on_line(&[0.0], g.clone(), 0.4, vec![0.5]).is_err());
        assert!(PackingInstance::on_line(&[0.0], g.clone(), 0.4, vec![0.2, 0.4]).is_err());
        assert!(PackingInstance::on_line(&[f64::NAN], g.clone(), 0.4, vec![0.2]).is_err());
        assert!(PackingInstance::on_line(&[0.0, 1.0], g, 0.4, vec![0.4, 0.2]).is_ok());
    }

    #[test]
    fn line_and_tree_distances() {
        let g = toy(&[0.1]);
        let inst = PackingInstance::on_line(&[0.0, 1.0, 3.5], g.clone(), 0.1, vec![0.1]).unwrap();
        assert_eq!(inst.distance(0, 1), 1.0);
        assert_eq!(inst.distance(1, 0), 1.0);
        assert_eq!(inst.distance(1, 2), 2.5);
        assert_eq!(inst.distance(2, 2), 0.0);

        // Tent path: tree distances on the rising side are height gaps.
        let n = 64usize;
        let samples: Vec<f64> = (0..=2 * n)
            .map(|i| if i <= n { i as f64 } else { (2 * n - i) as f64 } / n as f64)
            .collect();
        let tree =
            code_tree(ExcursionPath::new(samples, 0.01, PathOrigin::Synthetic).unwrap()).unwrap();
        let times = [0.08, 0.16, 0.32];
        let inst = PackingInstance::from_tree(&tree, &times, g, 0.1, vec![0.1]).unwrap();
        let d01 = inst.distance(0, 1);
        assert!((d01 - tree.tree_distance(0.08, 0.16).unwrap()).abs() < 1e-15);
        assert!((d01 - 0.125).abs() < 1e-12, "rising-side gap {d01}");
    }

    #[test]
    fn gauge_tables_reject_unknown_radii() {
        let g = PackingGauge::linear(&[0.4, 0.2], 2.0);
        assert_eq!(g.eval(0.4).unwrap(), 0.8);
        assert_eq!(g.eval(0.2).unwrap(), 0.4);
        assert!(g.eval(0.3).is_err());
    }

    #[test]
    fn validate_packing_flags_overlaps() {
        let radii = vec![0.4, 0.2];
        let g = toy(&radii);
        let inst = PackingInstance::on_line(&[0.0, 1.0, 2.0], g, 0.4, radii).unwrap();
        assert!(validate_packing(&inst, &[(0.0, 0.4), (1.0, 0.4)]).is_ok());
        // Same center: d = 0 can never exceed the radius sum.
        assert!(validate_packing(&inst, &[(0.0, 0.4), (0.0, 0.2)]).is_err());
        assert!(validate_packing(&inst, &[(0.5, 0.4)]).is_err());
        assert!(validate_packing(&inst, &[(0.0, 0.3)]).is_err());
    }
}
