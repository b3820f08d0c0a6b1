//! Counter-based splittable random streams.
//!
//! One root seed plus a replicate index deterministically select an
//! independent ChaCha8 stream, so results never depend on how replicates
//! are scheduled across workers. The splitting function is splitmix64 over
//! the (seed, index) pair, applied four times to fill a 256-bit key.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer: a bijective avalanche mix of a 64-bit word.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive the stream for (root seed, replicate index).
///
/// Streams for distinct indices under one seed, and for distinct seeds at
/// one index, are independent for every practical purpose: the key schedule
/// feeds 256 mixed bits into ChaCha8.
pub fn stream(root_seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let base = splitmix64(root_seed ^ splitmix64(index));
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        let word = splitmix64(base.wrapping_add((i as u64 + 1).wrapping_mul(0xa0761d6478bd642f)));
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Bit-pooled fair-coin source over any RngCore: one u64 refill serves 64
/// coin flips. The lattice walk experiments spend ~10¹⁰ flips, so per-flip
/// overhead matters.
pub struct CoinPool<R> {
    rng: R,
    bits: u64,
    left: u8,
}

impl<R: rand::RngCore> CoinPool<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, bits: 0, left: 0 }
    }

    #[inline]
    pub fn coin(&mut self) -> bool {
        if self.left == 0 {
            self.bits = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.bits & 1 == 1;
        self.bits >>= 1;
        self.left -= 1;
        b
    }

    /// Hand the underlying generator back (for mixed-use samplers).
    pub fn rng_mut(&mut self) -> &mut R {
        // Discard pooled bits so subsequent draws are stream-aligned.
        self.left = 0;
        &mut self.rng
    }
}
