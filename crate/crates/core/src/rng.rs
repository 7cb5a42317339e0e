//! Seeded random number generation.
//!
//! All samplers take a caller-owned generator. The CLI and tests use
//! [`SeededRng`] (ChaCha with 8 rounds) seeded through `seed_from_u64`; its
//! output stream is specified independently of platform and word size.

use rand::SeedableRng;

pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}
