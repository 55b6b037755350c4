//! Deterministic random streams.
//!
//! Every random draw in the crate flows from a single master seed. A stream is
//! addressed by a `(domain, index)` pair: the domain names the consumer (for
//! example ensemble generation vs. measurement settings) and the index names
//! the ensemble member. Each stream is a ChaCha8 generator keyed by
//! `splitmix64(master ^ splitmix64(domain))` with the ChaCha stream id set to
//! `index`, so streams never overlap and do not depend on evaluation order.
//! Parallel and sequential runs therefore draw identical numbers per member.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream domains used by the crate's experiment drivers.
pub mod domain {
    pub const GENERATOR: u64 = 1;
    pub const SETTINGS: u64 = 2;
    pub const SHOTS: u64 = 3;
    pub const BOOTSTRAP: u64 = 4;
    pub const HAAR_ORACLE: u64 = 5;
    pub const KAK: u64 = 6;
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStreams {
    master: u64,
}

impl SeedStreams {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    pub fn stream(&self, domain: u64, index: u64) -> SimRng {
        let key = splitmix64(self.master ^ splitmix64(domain));
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(index);
        rng
    }

    /// A child family of streams, used when one experiment nests another.
    pub fn child(&self, domain: u64, index: u64) -> SeedStreams {
        SeedStreams::new(splitmix64(splitmix64(self.master ^ domain) ^ index))
    }
}

/// Convenience for call sites that only need one generator.
pub fn seeded(seed: u64) -> SimRng {
    SeedStreams::new(seed).stream(0, 0)
}
