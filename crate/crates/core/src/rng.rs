//! Reproducible random streams.
//!
//! Every draw comes from ChaCha8 keyed by a 64-bit seed (expanded with
//! `rand_core`'s `seed_from_u64`), with the stream number selecting an
//! independent keystream. Sample `k` of a simulation uses stream `k`, so
//! results depend only on `(seed, k)` and never on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::num::Real;

/// The generator for stream `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Index drawn from `probs` by inverting the cumulative distribution.
///
/// Falls back to the last positive entry when rounding leaves the running
/// sum just short of the draw.
pub fn sample_index<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    let u = T::lit(rng.random::<f64>());
    let mut acc = T::zero();
    for (i, &p) in probs.iter().enumerate() {
        acc = acc + p;
        if u < acc {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > T::zero()).unwrap_or(0)
}
