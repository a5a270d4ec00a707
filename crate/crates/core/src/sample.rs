//! Instance plans for the lemma checks: every instance when the space is
//! small, otherwise a fixed number of seeded uniform draws.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) const EXHAUSTIVE_LIMIT: u128 = 1_000_000;
pub(crate) const SAMPLE_SIZE: usize = 10_000;

/// Mixes a base seed with a lemma id and `r` (FNV-1a, then splitmix).
pub(crate) fn derive_seed(base: u64, tag: &str, r: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes().chain((r as u64).to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = h ^ base.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn space_size(dims: &[usize]) -> u128 {
    dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
}

/// Index tuples into a product of ranges `0..dims[i]`.
pub(crate) struct Plan {
    dims: Vec<usize>,
    exhaustive: bool,
    rng: ChaCha8Rng,
    samples: usize,
}

impl Plan {
    pub(crate) fn new(dims: &[usize], seed: u64) -> Self {
        Self::with_limits(dims, seed, EXHAUSTIVE_LIMIT, SAMPLE_SIZE)
    }

    pub(crate) fn with_limits(dims: &[usize], seed: u64, exhaustive_limit: u128, samples: usize) -> Self {
        Plan {
            dims: dims.to_vec(),
            exhaustive: space_size(dims) <= exhaustive_limit,
            rng: ChaCha8Rng::seed_from_u64(seed),
            samples,
        }
    }

    pub(crate) fn is_exhaustive(&self) -> bool {
        self.exhaustive
    }

    /// Calls `f` on each planned tuple; stops early when `f` returns false.
    pub(crate) fn run(mut self, mut f: impl FnMut(&[usize]) -> bool) {
        if self.dims.contains(&0) {
            return;
        }
        let mut idx = vec![0usize; self.dims.len()];
        if self.exhaustive {
            loop {
                if !f(&idx) {
                    return;
                }
                let mut i = idx.len();
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < self.dims[i] {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
        for _ in 0..self.samples {
            for (slot, &d) in idx.iter_mut().zip(&self.dims) {
                *slot = self.rng.gen_range(0..d);
            }
            if !f(&idx) {
                return;
            }
        }
    }
}
