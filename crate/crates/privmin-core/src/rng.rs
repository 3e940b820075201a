//! Seeded random source with derivable sub-streams.
//!
//! Every randomized operation in this crate takes an explicit
//! [`RandomSource`] instead of a global generator. Sub-streams are derived
//! from the *seed*, not the generator state, so a stream for
//! `(document, k)` is the same no matter which thread asks for it first.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic pseudorandom stream.
///
/// Identical seeds produce identical draw sequences. Not cryptographically
/// secure; the privacy guarantees of the mechanisms rest on the parameter
/// epsilon, not on the unpredictability of this generator.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

/// SplitMix64 finalizer, used to fold tags into derived seeds.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive an independent stream from this stream's seed and a tag path.
    ///
    /// Derivation depends only on `(seed, tags)`, never on how many draws
    /// have already been taken, so parallel callers get reproducible
    /// streams regardless of scheduling.
    pub fn substream(&self, tags: &[u64]) -> RandomSource {
        let mut s = splitmix64(self.seed);
        for &t in tags {
            s = splitmix64(s ^ splitmix64(t));
        }
        RandomSource::new(s)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform draw in the open interval `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.rng.gen::<f64>();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform integer in `[0, bound)`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.rng.gen_range(0..bound)
    }

    /// Bernoulli draw: `true` with probability `p`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}
