//! Seed derivation for reproducible experiments.
//!
//! Every generator in this crate is driven by a ChaCha8 stream keyed from a
//! single `u64`. Sub-seeds for independent trials are derived with the
//! SplitMix64 permutation, chained over the cell parameters, so trials can
//! run in any order (or in parallel) without changing their outcomes.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// SplitMix64 step: a bijective mix of the 64-bit state.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Per-trial seed: splitmix chain over (master, n, density bits, trial).
pub fn trial_seed(master: u64, n: u64, density_bits: u64, trial: u64) -> u64 {
    let mut s = splitmix64(master);
    s = splitmix64(s ^ n);
    s = splitmix64(s ^ density_bits);
    s = splitmix64(s ^ trial);
    s
}

/// The crate-wide PRNG, keyed from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
