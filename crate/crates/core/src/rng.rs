//! Seeded counter-based random stream.
//!
//! The generator is ChaCha20 (20 rounds, 64-bit block counter, 64-bit stream
//! id) keyed as follows so that other implementations can reproduce the exact
//! sequence:
//!
//! - key bytes `0..8` hold the seed as a little-endian `u64`, bytes `8..32`
//!   are zero; stream id 0; block counter starts at 0.
//! - each 64-byte block is consumed as sixteen little-endian `u32` words in
//!   order; a `u64` is two consecutive words, low word first.
//! - a uniform `f64` in `[0, 1)` is `(u64 >> 11) · 2⁻⁵³`.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Debug)]
pub struct CounterRng {
    inner: ChaCha20Rng,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        CounterRng {
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    pub fn next_u64(&mut self) -> u64 {
        let lo = u64::from(self.inner.next_u32());
        let hi = u64::from(self.inner.next_u32());
        lo | (hi << 32)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
