//! AR(1): `Φ_t(y) = φ0 + φ1·y + ε_t` on `R`.

use std::sync::Arc;

use crate::error::{Result, SreError};
use crate::map::{AffineMap, RandomMap};
use crate::models::noise::{NoiseDistribution, NoiseSpec};
use crate::rng::StreamSeed;
use crate::sequence::{MapSequence, SequenceInfo, Variant};
use crate::space::StateSpace;
use crate::trajectory::fnv1a;

pub const MODEL_ID: &str = "ar";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArParams {
    pub phi0: f64,
    pub phi1: f64,
    pub noise: NoiseSpec,
}

impl Default for ArParams {
    fn default() -> Self {
        Self {
            phi0: 0.0,
            phi1: 0.5,
            noise: NoiseSpec::standard_normal(),
        }
    }
}

impl ArParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.phi0.is_finite() && self.phi1.is_finite()) {
            return Err(SreError::config("ArParams: phi0 and phi1 must be finite"));
        }
        self.noise.validate()?;
        if matches!(self.noise.distribution, NoiseDistribution::LogNormal { .. }) {
            return Err(SreError::config("ArParams: noise must have zero mean"));
        }
        if !self.noise.is_degenerate() && self.noise.moments().1 <= 0.0 {
            return Err(SreError::config("ArParams: noise variance sigma^2 must be > 0"));
        }
        Ok(())
    }

    /// `|φ1| < 1`; informational only.
    pub fn is_contractive(&self) -> bool {
        self.phi1.abs() < 1.0
    }
}

#[derive(Debug, Clone)]
pub struct ArSequence {
    params: ArParams,
    seed: StreamSeed,
    space: Arc<StateSpace>,
    info: SequenceInfo,
}

pub fn make_ar(params: ArParams, seed: impl Into<StreamSeed>) -> Result<ArSequence> {
    params.validate()?;
    let seed = seed.into();
    Ok(ArSequence {
        params,
        seed,
        space: Arc::new(StateSpace::real(1)),
        info: SequenceInfo {
            model_id: MODEL_ID.into(),
            seed: seed.seed,
            replicate: seed.replicate,
            variant: Variant::Exact,
            source_id: fnv1a([1, seed.seed, seed.replicate]),
            degenerate_noise: params.noise.is_degenerate(),
        },
    })
}

impl ArSequence {
    pub fn params(&self) -> &ArParams {
        &self.params
    }

    pub fn noise_at(&self, t: i64) -> f64 {
        self.params.noise.at(self.seed, t)
    }
}

impl MapSequence for ArSequence {
    fn info(&self) -> &SequenceInfo {
        &self.info
    }

    fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    fn map_at(&self, t: i64) -> Result<RandomMap> {
        let a = self.params.phi0 + self.noise_at(t);
        Ok(RandomMap::affine(self.space.clone(), AffineMap::scalar(a, self.params.phi1))?.at_time(t))
    }
}
