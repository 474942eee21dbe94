//! Seed derivation.
//!
//! Every random stream is a ChaCha8 generator (`rand_chacha::ChaCha8Rng`)
//! seeded with a 64-bit value derived from the scenario seed through a
//! SplitMix64 chain over a list of stream coordinates (purpose, replicate,
//! node). ChaCha8 output is fixed by its specification, so a given seed
//! reproduces the same run on every platform and build.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream purposes. Keeping arrivals and gating on separate streams means
/// the arrival process of a node does not depend on its transmit probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Arrivals = 1,
    Gating = 2,
    Agent = 3,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with stream coordinates into a child seed.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(master), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

pub fn stream(master: u64, purpose: Stream, node: usize) -> SimRng {
    SimRng::seed_from_u64(derive_seed(master, &[purpose as u64, node as u64]))
}

/// Seed of replicate `index` of a scenario with master seed `seed`.
pub fn replicate_seed(seed: u64, index: usize) -> u64 {
    if index == 0 {
        seed
    } else {
        derive_seed(seed, &[0xAB, index as u64])
    }
}
