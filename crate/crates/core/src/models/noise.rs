//! Laws of the i.i.d. driving noise `ε_t`.

use rand::Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal, StudentT};

use crate::error::{Result, SreError};
use crate::rng::{Domain, StreamSeed};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseDistribution {
    StandardNormal,
    /// Student t with `df > 2` degrees of freedom, rescaled to unit variance.
    StudentT { df: f64 },
    /// ±1 with equal probability.
    Rademacher,
    /// `exp(meanlog + sdlog·Z)`; not centred, used by the lemma probes.
    LogNormal { meanlog: f64, sdlog: f64 },
    /// `ε ≡ 0`, for exact fixed-point tests.
    #[cfg(any(test, feature = "degenerate-noise"))]
    Degenerate,
}

/// `ε_t = scale · Z_t` with `Z_t` drawn from `distribution`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub distribution: NoiseDistribution,
    pub scale: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::standard_normal()
    }
}

impl NoiseSpec {
    pub fn standard_normal() -> Self {
        Self {
            distribution: NoiseDistribution::StandardNormal,
            scale: 1.0,
        }
    }

    pub fn new(distribution: NoiseDistribution) -> Self {
        Self {
            distribution,
            scale: 1.0,
        }
    }

    pub fn scaled(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    #[cfg(any(test, feature = "degenerate-noise"))]
    pub fn degenerate() -> Self {
        Self::new(NoiseDistribution::Degenerate)
    }

    pub fn is_degenerate(&self) -> bool {
        #[cfg(any(test, feature = "degenerate-noise"))]
        if self.distribution == NoiseDistribution::Degenerate {
            return true;
        }
        false
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_degenerate() && !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(SreError::config(format!(
                "noise scale must be finite and > 0, got {}",
                self.scale
            )));
        }
        match self.distribution {
            NoiseDistribution::StudentT { df } if !(df > 2.0) => Err(SreError::config(format!(
                "student_t needs df > 2 for a unit-variance scaling, got {df}"
            ))),
            NoiseDistribution::LogNormal { sdlog, meanlog }
                if !(sdlog >= 0.0 && sdlog.is_finite() && meanlog.is_finite()) =>
            {
                Err(SreError::config("lognormal needs finite meanlog and sdlog >= 0"))
            }
            _ => Ok(()),
        }
    }

    /// True for Student t with `df <= 4`, where fourth moments fail.
    pub fn heavy_tail_warning(&self) -> bool {
        matches!(self.distribution, NoiseDistribution::StudentT { df } if df <= 4.0)
    }

    /// Mean and variance of `ε`.
    pub fn moments(&self) -> (f64, f64) {
        let s2 = self.scale * self.scale;
        match self.distribution {
            NoiseDistribution::StandardNormal
            | NoiseDistribution::StudentT { .. }
            | NoiseDistribution::Rademacher => (0.0, s2),
            NoiseDistribution::LogNormal { meanlog, sdlog } => {
                let v = sdlog * sdlog;
                let mean = (meanlog + v / 2.0).exp();
                (self.scale * mean, s2 * (v.exp() - 1.0) * (2.0 * meanlog + v).exp())
            }
            #[cfg(any(test, feature = "degenerate-noise"))]
            NoiseDistribution::Degenerate => (0.0, 0.0),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z = match self.distribution {
            NoiseDistribution::StandardNormal => StandardNormal.sample(rng),
            NoiseDistribution::StudentT { df } => {
                let t: f64 = StudentT::new(df).expect("validated df").sample(rng);
                t * ((df - 2.0) / df).sqrt()
            }
            NoiseDistribution::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            NoiseDistribution::LogNormal { meanlog, sdlog } => {
                LogNormal::new(meanlog, sdlog).expect("validated").sample(rng)
            }
            #[cfg(any(test, feature = "degenerate-noise"))]
            NoiseDistribution::Degenerate => 0.0,
        };
        self.scale * z
    }

    /// `ε_t` from stream `(seed, Noise, t)`; any consumer of that stream sees
    /// the same value.
    pub fn at(&self, seed: StreamSeed, t: i64) -> f64 {
        self.sample(&mut seed.stream(Domain::Noise, t))
    }
}
