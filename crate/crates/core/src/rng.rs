//! One top-level seed fans out into named sub-streams so that adding a new
//! consumer never perturbs the instances another one sees.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn fnv1a(name: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Deterministic RNG for the sub-stream `name` of the run seed.
pub fn stream(seed: u64, name: &str) -> ChaCha12Rng {
    let mut state = seed ^ fnv1a(name);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// A single u64 drawn from the sub-stream, for seeding leaf components.
pub fn stream_value(seed: u64, name: &str) -> u64 {
    let mut state = seed ^ fnv1a(name);
    splitmix(&mut state)
}
