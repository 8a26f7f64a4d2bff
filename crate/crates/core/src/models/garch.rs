//! GARCH(1,1) variance recursions on `[0, ∞)`.
//!
//! The data-generating view iterates `σ²_t = ω + (α·ε²_{t−1} + β)·σ²_{t−1}`,
//! a random-coefficient recursion. The filter view runs
//! `σ²_t = ω + α·y²_{t−1} + β·σ²_{t−1}` along a given observation path.

use std::sync::Arc;

use crate::error::{Result, SreError};
use crate::map::{AffineMap, RandomMap};
use crate::models::noise::{NoiseDistribution, NoiseSpec};
use crate::rng::StreamSeed;
use crate::sequence::{MapSequence, SequenceInfo, Variant};
use crate::space::StateSpace;
use crate::trajectory::{fnv1a, Trajectory, TrajectoryMeta};

pub const MODEL_ID: &str = "garch";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub noise: NoiseSpec,
}

impl Default for GarchParams {
    fn default() -> Self {
        Self {
            omega: 0.1,
            alpha: 0.2,
            beta: 0.7,
            noise: NoiseSpec::standard_normal(),
        }
    }
}

impl GarchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(SreError::config(format!("GarchParams: omega must be > 0, got {}", self.omega)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(SreError::config(format!("GarchParams: alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(SreError::config(format!("GarchParams: beta must be >= 0, got {}", self.beta)));
        }
        validate_unit_noise("GarchParams", &self.noise)
    }

    /// `ω / (1 − α − β)` when `α + β < 1`.
    pub fn unconditional_variance(&self) -> Option<f64> {
        let persistence = self.alpha + self.beta;
        (persistence < 1.0).then(|| self.omega / (1.0 - persistence))
    }
}

pub(crate) fn validate_unit_noise(owner: &str, noise: &NoiseSpec) -> Result<()> {
    noise.validate()?;
    if noise.is_degenerate() {
        return Ok(());
    }
    if matches!(noise.distribution, NoiseDistribution::LogNormal { .. }) {
        return Err(SreError::config(format!("{owner}: noise must have zero mean")));
    }
    let (_, var) = noise.moments();
    if (var - 1.0).abs() > 1e-12 {
        return Err(SreError::config(format!("{owner}: noise must have unit variance, got {var}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GarchView {
    DataGenerating,
    FilterGivenPath,
}

#[derive(Debug, Clone)]
pub struct GarchSequence {
    params: GarchParams,
    seed: StreamSeed,
    view: GarchView,
    path: Option<Arc<Trajectory>>,
    space: Arc<StateSpace>,
    info: SequenceInfo,
}

/// Builds either view; the filter view requires an observation path `y_t`.
pub fn make_garch(
    params: GarchParams,
    seed: impl Into<StreamSeed>,
    view: GarchView,
    path: Option<Arc<Trajectory>>,
) -> Result<GarchSequence> {
    params.validate()?;
    let seed = seed.into();
    let source_id = match (view, &path) {
        (GarchView::DataGenerating, _) => fnv1a([2, seed.seed, seed.replicate]),
        (GarchView::FilterGivenPath, Some(p)) => p.fingerprint(),
        (GarchView::FilterGivenPath, None) => {
            return Err(SreError::config("GARCH filter view needs an observation path"))
        }
    };
    Ok(GarchSequence {
        params,
        seed,
        view,
        path: if view == GarchView::FilterGivenPath { path } else { None },
        space: Arc::new(StateSpace::half_line()),
        info: SequenceInfo {
            model_id: MODEL_ID.into(),
            seed: seed.seed,
            replicate: seed.replicate,
            variant: Variant::Exact,
            source_id,
            degenerate_noise: params.noise.is_degenerate(),
        },
    })
}

impl GarchSequence {
    pub fn params(&self) -> &GarchParams {
        &self.params
    }

    pub fn view(&self) -> GarchView {
        self.view
    }

    pub fn noise_at(&self, t: i64) -> f64 {
        self.params.noise.at(self.seed, t)
    }

    /// `y_t = σ_t·ε_t` for a data-view variance trajectory.
    pub fn observations(&self, variance: &Trajectory) -> Trajectory {
        let states = variance
            .times()
            .zip(&variance.states)
            .map(|(t, s)| vec![s[0].sqrt() * self.noise_at(t)])
            .collect();
        Trajectory {
            t0: variance.t0,
            states,
            meta: TrajectoryMeta {
                model_id: format!("{MODEL_ID}_observations"),
                ..variance.meta.clone()
            },
        }
    }
}

impl MapSequence for GarchSequence {
    fn info(&self) -> &SequenceInfo {
        &self.info
    }

    fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    fn time_range(&self) -> Option<(i64, i64)> {
        self.path.as_ref().map(|p| (p.t0 + 1, p.t_end() + 1))
    }

    fn map_at(&self, t: i64) -> Result<RandomMap> {
        let GarchParams { omega, alpha, beta, .. } = self.params;
        let map = match (self.view, &self.path) {
            (GarchView::DataGenerating, _) => {
                let e = self.noise_at(t - 1);
                AffineMap::scalar(omega, alpha * e * e + beta)
            }
            (GarchView::FilterGivenPath, Some(path)) => {
                let y = path.at(t - 1).ok_or_else(|| {
                    SreError::config(format!(
                        "observation path covers [{}, {}], map at t = {t} needs y_{}",
                        path.t0,
                        path.t_end(),
                        t - 1
                    ))
                })?[0];
                AffineMap::scalar(omega + alpha * y * y, beta)
            }
            (GarchView::FilterGivenPath, None) => unreachable!("checked in make_garch"),
        };
        Ok(RandomMap::affine(self.space.clone(), map)?.at_time(t))
    }
}
