//! SplitMix64: the tiny, portable generator used for all seeded sampling.
//!
//! Chosen over an external RNG crate so trial sequences are bit-identical
//! across platforms and releases; reproducibility of harness runs is part of
//! the contract.

use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[0, n)` via the multiply-shift reduction.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// `k` distinct values from `[0, n)`, sorted (partial Fisher-Yates).
    pub fn distinct(&mut self, n: u64, k: usize) -> Vec<u64> {
        debug_assert!(k as u64 <= n);
        let mut pool: Vec<u64> = (0..n).collect();
        for i in 0..k {
            let j = i as u64 + self.below(n - i as u64);
            pool.swap(i, j as usize);
        }
        let mut out: Vec<u64> = pool[..k].to_vec();
        out.sort_unstable();
        out
    }

    /// Derives an independent stream, for per-trial generators.
    pub fn fork(&mut self, salt: u64) -> SplitMix64 {
        SplitMix64::new(self.next_u64() ^ salt.rotate_left(32))
    }
}
