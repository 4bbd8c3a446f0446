//! Reproducible, splittable random streams.
//!
//! Every sampled unit (one molecule of one cohort of one frame) gets its own
//! counter-based ChaCha stream keyed by (master seed, lane, unit). Draws are
//! therefore independent of how work is partitioned across threads, which is
//! what makes the simulator outputs bit-identical under any parallelism.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A keyed family of independent streams: the key encodes (master seed,
/// lane); the ChaCha stream id encodes the unit, so distinct units can never
/// collide.
#[derive(Clone)]
pub(crate) struct StreamFamily {
    key: [u8; 32],
}

impl StreamFamily {
    pub fn new(master_seed: u64, lane: u64) -> Self {
        let mut state = master_seed ^ lane.wrapping_mul(0xA076_1D64_78BD_642F);
        // one warm-up step decorrelates nearby (seed, lane) pairs
        let _ = splitmix(&mut state);
        let mut key = [0u8; 32];
        for chunk in key.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
        }
        Self { key }
    }

    pub fn stream(&self, unit: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(unit);
        rng
    }
}
