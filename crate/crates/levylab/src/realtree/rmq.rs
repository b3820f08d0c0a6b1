//! Range-minimum index over the coding path's samples.
//!
//! Two-level scheme: per-block minima under a sparse table, with the
//! partial blocks at the range ends scanned directly. Queries cost
//! O(block) with a tiny constant; memory stays ~n/block·log(n/block)
//! values, which matters for million-sample paths where a full sparse
//! table would be hundreds of megabytes.

const BLOCK: usize = 64;

#[derive(Debug, Clone)]
pub struct RangeMin {
    values: Vec<f64>,
    /// table[k][b] = min over blocks [b, b + 2^k).
    table: Vec<Vec<f64>>,
}

impl RangeMin {
    pub fn new(values: Vec<f64>) -> Self {
        let n_blocks = values.len().div_ceil(BLOCK);
        let mut level0: Vec<f64> = Vec::with_capacity(n_blocks);
        for b in 0..n_blocks {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(values.len());
            level0.push(values[lo..hi].iter().copied().fold(f64::INFINITY, f64::min));
        }
        let mut table = vec![level0];
        let mut k = 1usize;
        while (1 << k) <= n_blocks {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let row: Vec<f64> = (0..=n_blocks - (1 << k))
                .map(|b| prev[b].min(prev[b + half]))
                .collect();
            table.push(row);
            k += 1;
        }
        Self { values, table }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Minimum of values[lo..=hi].
    pub fn min(&self, lo: usize, hi: usize) -> f64 {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        debug_assert!(hi < self.values.len());
        let b_lo = lo / BLOCK;
        let b_hi = hi / BLOCK;
        if b_hi - b_lo <= 1 {
            return self.values[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
        }
        let head_end = (b_lo + 1) * BLOCK - 1;
        let tail_start = b_hi * BLOCK;
        let mut m = self.values[lo..=head_end]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        m = m.min(
            self.values[tail_start..=hi]
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
        );
        // Full blocks (b_lo+1 .. b_hi) via the sparse table.
        let first = b_lo + 1;
        let count = b_hi - first;
        if count > 0 {
            let k = (usize::BITS - 1 - count.leading_zeros()) as usize;
            let row = &self.table[k];
            m = m.min(row[first]).min(row[first + count - (1 << k)]);
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn matches_brute_force() {
        let mut rng = crate::num::stream(42, 0);
        let n = 1500;
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let rmq = RangeMin::new(values.clone());
        for _ in 0..4000 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let brute = values[lo..=hi].iter().copied().fold(f64::INFINITY, f64::min);
            assert_eq!(rmq.min(a, b), brute, "range [{lo}, {hi}]");
        }
    }

    #[test]
    fn single_element_and_full_range() {
        let v = vec![3.0, 1.0, 2.0];
        let rmq = RangeMin::new(v);
        assert_eq!(rmq.min(0, 0), 3.0);
        assert_eq!(rmq.min(0, 2), 1.0);
        assert_eq!(rmq.min(2, 1), 1.0);
    }
}
