//! Deterministic seed derivation.
//!
//! Every stochastic component (per-tree bootstrap, per-run split, permutation
//! shuffles) draws from a ChaCha8 stream seeded by [`mix`]. Derived seeds
//! depend only on the parent seed and the child index, so adding trees or
//! runs never reshuffles earlier ones, and parallel execution reproduces the
//! serial result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` from `seed`:
/// `splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15)` with wrapping
/// arithmetic.
pub fn mix(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
