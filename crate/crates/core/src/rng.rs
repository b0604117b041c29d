//! Seeded randomness for sweeps.
//!
//! The stream is SplitMix64 (state increment `0x9e3779b97f4a7c15`, output
//! mix multipliers `0xbf58476d1ce4e5b9` and `0x94d049bb133111eb`, shifts
//! 30/27/31). Bounded draws use rejection sampling on the raw 64-bit output
//! so any implementation of the same rule reproduces the streams exactly.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug)]
pub struct SeededRng(SplitMix64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform value in `[0, n)`: redraw while the raw value falls in the
    /// top partial bucket, then reduce mod `n`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % n;
            }
        }
    }
}

/// Seed for a sub-stream: first output of SplitMix64 seeded with
/// `master ^ (key · 0x9e3779b97f4a7c15)`.
pub fn derive_seed(master: u64, key: u64) -> u64 {
    SeededRng::new(master ^ key.wrapping_mul(GOLDEN)).next_u64()
}
