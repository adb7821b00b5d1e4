//! Counter-addressable random streams.
//!
//! Every random quantity in a simulation is drawn from a stream addressed by
//! `(seed, tag, counter)`. Two parties holding the same seed can therefore
//! reproduce each other's draws for any slot without sharing generator state,
//! and distinct tags never share key material.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Distinguishes independent streams derived from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamTag {
    /// Per-slot permutation of a random-permutation schedule.
    Permutation = 1,
    /// `G1`: the coin deciding between the selector multiset and the fallback branch.
    Coin = 2,
    /// `G2`: the index into the selector multiset.
    MultisetIndex = 3,
    /// Uniform channel picks (random baseline and the async fallback branch).
    Channel = 4,
    /// Per-trial material in the experiment harness.
    Trial = 5,
    /// Scenario generation.
    Scenario = 6,
    /// Anything else derived from a seed (LSH2 relabelings, user seeds, ...).
    Derived = 7,
}

/// A fresh generator for `(seed, tag, counter)`.
pub fn stream(seed: u64, tag: StreamTag, counter: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(tag as u64).to_le_bytes());
    key[16..24].copy_from_slice(&counter.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// A uniform draw from `[0, 1)`.
pub fn unit(seed: u64, tag: StreamTag, counter: u64) -> f64 {
    stream(seed, tag, counter).random::<f64>()
}

/// A child seed, e.g. one per trial or per user.
pub fn derive_seed(seed: u64, tag: StreamTag, counter: u64) -> u64 {
    stream(seed, tag, counter).random::<u64>()
}
