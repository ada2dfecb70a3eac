//! Seeded random streams.
//!
//! Every experiment derives an independent ChaCha stream from a master seed
//! and a short key (for example `(n, sample index)`), so results do not
//! depend on how work is spread over threads.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as StreamRng;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Mixes a seed with a key path into a new 64-bit seed.
pub fn derive_seed(seed: u64, key: &[u64]) -> u64 {
    key.iter()
        .fold(splitmix(seed), |acc, &k| splitmix(acc ^ splitmix(k)))
}

/// A fresh stream for `(seed, key...)`.
pub fn stream(seed: u64, key: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(seed, key))
}
