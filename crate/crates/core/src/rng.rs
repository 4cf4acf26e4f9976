//! Seed derivation and random streams.
//!
//! Every random decision in the crate draws from a [`Stream`] obtained from
//! an [`RngSeed`]. Seeds form a tree: a child seed is a pure function of its
//! parent seed, a purpose string and an index, so independent work units
//! (grid cells, repeats, folds) get independent streams whose contents do not
//! depend on scheduling.
//!
//! The mixing function is SplitMix64 (Steele, Lea & Flood 2014):
//!
//! ```text
//! z = x + 0x9E3779B97F4A7C15
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z = z ^ (z >> 31)
//! ```
//!
//! with wrapping arithmetic. A child seed is
//! `mix(... mix(mix(mix(parent) ^ b0) ^ b1) ... ^ index)` over the purpose
//! bytes `b0, b1, ...`. A stream is ChaCha8 keyed by four successive
//! SplitMix64 outputs of the seed, little-endian.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream type used throughout the crate.
pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        RngSeed(seed)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Derive an independent child seed for `purpose` / `index`.
    pub fn child(self, purpose: &str, index: u64) -> RngSeed {
        let mut h = mix(self.0);
        for b in purpose.bytes() {
            h = mix(h ^ u64::from(b));
        }
        RngSeed(mix(h ^ index))
    }

    pub fn stream(self) -> Stream {
        let mut key = [0u8; 32];
        let mut state = self.0;
        for chunk in key.chunks_exact_mut(8) {
            state = mix(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}
