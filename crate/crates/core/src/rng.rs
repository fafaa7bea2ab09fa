//! Reproducible per-replicate random streams.
//!
//! Every replicate gets its own ChaCha8 stream keyed by (seed, tag) and
//! selected by the replicate index, so results do not depend on how
//! replicates are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub tag: u64,
    pub replicate: u64,
}

impl SeedRecord {
    pub fn new(seed: u64) -> Self {
        SeedRecord { seed, tag: 0, replicate: 0 }
    }

    pub fn with_tag(self, tag: u64) -> Self {
        SeedRecord { tag, ..self }
    }

    pub fn replicate(self, replicate: u64) -> Self {
        SeedRecord { replicate, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix(self.seed ^ splitmix(self.tag)));
        rng.set_stream(self.replicate);
        rng
    }
}

pub fn stream(seed: u64, tag: u64, replicate: u64) -> ChaCha8Rng {
    SeedRecord { seed, tag, replicate }.rng()
}

/// Mixes a value into a tag, e.g. to key streams by system size.
pub fn tag_of(parts: &[u64]) -> u64 {
    parts.iter().fold(0x9e37_79b9_7f4a_7c15, |h, &p| splitmix(h ^ p))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
