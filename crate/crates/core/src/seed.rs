//! Stable seed derivation. Child seeds depend only on their inputs, never on
//! scheduling or on the standard library's hasher.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used throughout the crate; its output stream is stable
/// across platforms and releases for a given seed.
pub type SolverRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a root seed with a sequence of integer components.
pub fn derive_seed(root: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(root), |acc, &p| splitmix64(acc ^ splitmix64(p.wrapping_add(GOLDEN))))
}

pub fn rng_from(seed: u64) -> SolverRng {
    SolverRng::seed_from_u64(seed)
}
