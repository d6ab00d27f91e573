//! Reproducible random streams.
//!
//! Every stochastic routine takes a `&mut impl Rng`. Monte-Carlo drivers
//! derive one independent stream per trial with [`substream`]: ChaCha8 keyed
//! by the 64-bit master seed, with the trial index selecting one of its 2^64
//! streams. Results therefore depend only on `(seed, trial)` and never on
//! how trials are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for all simulations.
pub type SimRng = ChaCha8Rng;

/// Independent stream `stream` of the generator keyed by `seed`.
pub fn substream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes a purpose tag into a master seed so that, e.g., training and
/// evaluation frames never share streams.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
