//! Reproducible random-number state.
//!
//! Every randomized routine in this crate takes an [`RngState`] rather than a
//! live generator. A state is a `(seed, stream)` pair backed by ChaCha8;
//! identical states reproduce identical draws on every platform, and
//! substreams derived for parallel trials are independent by construction
//! (distinct ChaCha stream ids on the same key).

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seedable, splittable RNG state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    stream: u64,
}

impl RngState {
    /// Root state for a given seed (stream 0).
    pub fn new(seed: u64) -> Self {
        RngState { seed, stream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derive the `index`-th child state. Children of distinct indices (and
    /// of distinct parents) map to distinct ChaCha streams.
    pub fn substream(&self, index: u64) -> Self {
        let mixed = splitmix64(self.stream ^ splitmix64(index.wrapping_add(0x9E37_79B9)));
        RngState {
            seed: self.seed,
            stream: mixed,
        }
    }

    /// Instantiate the generator for this state.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
