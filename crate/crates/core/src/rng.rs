//! Seeded randomness helpers.
//!
//! All stochastic behavior in the crate flows through ChaCha8, a portable
//! counter-based generator with an identical stream on every platform, so a
//! seed fully determines datasets, initializations, and shuffles.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream from (seed, salt), e.g. per-epoch shuffles.
/// SplitMix64 finalizer keeps nearby salts uncorrelated.
pub(crate) fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard normal draw via Box-Muller on the uniform stream.
pub(crate) fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    // gen::<f64>() is uniform on [0, 1); shift away from 0 for the log.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
