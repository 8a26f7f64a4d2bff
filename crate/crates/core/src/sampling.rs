//! Scalar sample sources for moment checks and lemma probes.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::models::noise::NoiseSpec;
use crate::rng::{Domain, StreamSeed};

/// Produces the `index`-th draw of a scalar random variable.
///
/// `rng` is a fresh stream keyed by `(seed, domain, index)`, so draws are
/// independent of evaluation order.
pub trait ScalarSampler: Sync {
    fn sample(&self, index: u64, rng: &mut ChaCha8Rng) -> Result<f64>;
}

impl<F> ScalarSampler for F
where
    F: Fn(u64, &mut ChaCha8Rng) -> Result<f64> + Sync,
{
    fn sample(&self, index: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
        self(index, rng)
    }
}

impl ScalarSampler for NoiseSpec {
    fn sample(&self, _index: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
        Ok(NoiseSpec::sample(self, rng))
    }
}

/// `|ε|` for a noise law.
#[derive(Debug, Clone, Copy)]
pub struct AbsNoise(pub NoiseSpec);

impl ScalarSampler for AbsNoise {
    fn sample(&self, _index: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
        Ok(self.0.sample(rng).abs())
    }
}

/// Draws `n` samples in parallel; the result does not depend on scheduling.
pub fn draw<S: ScalarSampler + ?Sized>(sampler: &S, n: usize, seed: u64, domain: Domain) -> Result<Vec<f64>> {
    let seed = StreamSeed::new(seed);
    (0..n as u64)
        .into_par_iter()
        .map(|i| sampler.sample(i, &mut seed.stream(domain, i as i64)))
        .collect()
}
