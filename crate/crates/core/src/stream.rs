//! Reproducible random streams.
//!
//! A [`SeededStream`] is ChaCha20 (the `rand_chacha` implementation) keyed by
//! `seed_from_u64(seed)` with the ChaCha stream counter set to `stream`.
//! Batch samplers give chunk `i` the stream `i`, so results never depend on
//! how chunks are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

/// Name of the generator, recorded in reports.
pub const GENERATOR: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64 + set_stream)";

/// Samples drawn per stream in batch sampling.
pub const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream: u64,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// A sibling stream with the same seed.
    pub fn split(&self, stream: u64) -> Self {
        Self { seed: self.seed, stream }
    }

    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Runs `f` over `count` draws, chunked onto streams `0, 1, ...` of `base`,
/// in parallel. Output order is draw order.
pub fn par_batch<T, F>(base: SeededStream, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha20Rng) -> T + Sync,
{
    use rayon::prelude::*;
    let chunks = count.div_ceil(CHUNK);
    let nested: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = base.split(c as u64).rng();
            let len = CHUNK.min(count - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    nested.into_iter().flatten().collect()
}
