//! Compensated (Kahan–Neumaier) summation.
//!
//! Monte Carlo aggregation is declared associative and order-independent in
//! the module contracts; compensated accumulation keeps that promise honest
//! for the 10⁴–10⁶ term sums the experiments produce.

/// Neumaier variant of Kahan summation: exact for sums whose condition
/// number stays within f64 range, regardless of term ordering pathologies.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        let mut s = KahanSum::new();
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn many_small_terms() {
        let s: KahanSum = std::iter::repeat(0.1).take(1_000_000).collect();
        assert!((s.value() - 100_000.0).abs() < 1e-9);
    }
}
