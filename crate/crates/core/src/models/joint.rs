//! Joint conditional mean / variance model and its two variance filters.
//!
//! Data: `Y_t = μ_t + σ_t·ε_t` with
//! `μ_t = ω_μ + α_μ·Y_{t−1} + β_μ·μ_{t−1}` and
//! `σ²_t = ω_σ + α_σ·(Y_{t−1} − μ_{t−1})² + β_σ·σ²_{t−1}`.
//!
//! The exact variance filter uses the true mean path `μ_t`; the perturbed
//! filter uses the initialized mean `μ̄_t = ω_μ + α_μ·Y_{t−1} + β_μ·μ̄_{t−1}`
//! started from `μ̄_0`. Both are affine in `σ²` with slope `β_σ`, so their
//! difference is the intercept gap `α_σ·[(Y − μ̄)² − (Y − μ)²]_{t−1}`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SreError};
use crate::lipschitz::MapDifference;
use crate::map::{AffineMap, RandomMap};
use crate::models::garch::validate_unit_noise;
use crate::models::noise::NoiseSpec;
use crate::rng::StreamSeed;
use crate::sequence::{MapSequence, SequenceInfo, Variant};
use crate::space::StateSpace;
use crate::trajectory::{fnv1a, Trajectory, TrajectoryMeta};

pub const MODEL_ID: &str = "joint_filter";

pub const DEFAULT_BURN_IN: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointFilterParams {
    pub omega_mu: f64,
    pub alpha_mu: f64,
    pub beta_mu: f64,
    pub omega_sigma: f64,
    pub alpha_sigma: f64,
    pub beta_sigma: f64,
    pub noise: NoiseSpec,
    /// `μ̄_0`.
    pub mu_init: f64,
    /// `σ̄²_0`.
    pub sigma2_init: f64,
    /// Steps simulated before `t = 0` to approximate the stationary start.
    pub burn_in: usize,
}

impl Default for JointFilterParams {
    fn default() -> Self {
        Self {
            omega_mu: 0.1,
            alpha_mu: 0.1,
            beta_mu: 0.5,
            omega_sigma: 0.1,
            alpha_sigma: 0.2,
            beta_sigma: 0.7,
            noise: NoiseSpec::standard_normal(),
            mu_init: 1.0,
            sigma2_init: 1.0,
            burn_in: DEFAULT_BURN_IN,
        }
    }
}

impl JointFilterParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("omega_mu", self.omega_mu),
            ("alpha_mu", self.alpha_mu),
            ("beta_mu", self.beta_mu),
            ("mu_init", self.mu_init),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(SreError::config(format!("JointFilterParams: {name} must be finite")));
            }
        }
        if !(self.omega_sigma > 0.0 && self.omega_sigma.is_finite()) {
            return Err(SreError::config(format!(
                "JointFilterParams: omega_sigma must be > 0, got {}",
                self.omega_sigma
            )));
        }
        if !(self.alpha_sigma >= 0.0 && self.alpha_sigma.is_finite()) {
            return Err(SreError::config(format!(
                "JointFilterParams: alpha_sigma must be >= 0, got {}",
                self.alpha_sigma
            )));
        }
        if !(self.beta_sigma >= 0.0 && self.beta_sigma.is_finite()) {
            return Err(SreError::config(format!(
                "JointFilterParams: beta_sigma must be >= 0, got {}",
                self.beta_sigma
            )));
        }
        if !(self.sigma2_init >= 0.0 && self.sigma2_init.is_finite()) {
            return Err(SreError::config(format!(
                "JointFilterParams: sigma2_init must be >= 0, got {}",
                self.sigma2_init
            )));
        }
        validate_unit_noise("JointFilterParams", &self.noise)
    }
}

/// Simulated data and both mean paths, indexed from `t = −burn_in`.
#[derive(Debug)]
pub struct JointPath {
    t0: i64,
    y: Vec<f64>,
    mu: Vec<f64>,
    sigma2: Vec<f64>,
    /// `μ̄_t` for `t ≥ 0` (index `t`).
    mu_bar: Vec<f64>,
    /// `μ̄_t − μ_t` from the error recursion `e_t = β_μ·e_{t−1}`.
    mean_error: Vec<f64>,
}

impl JointPath {
    fn idx(&self, t: i64) -> Option<usize> {
        let k = usize::try_from(t - self.t0).ok()?;
        (k < self.y.len()).then_some(k)
    }

    pub fn t_range(&self) -> (i64, i64) {
        (self.t0, self.t0 + self.y.len() as i64 - 1)
    }

    pub fn y(&self, t: i64) -> Option<f64> {
        self.idx(t).map(|k| self.y[k])
    }

    pub fn mu(&self, t: i64) -> Option<f64> {
        self.idx(t).map(|k| self.mu[k])
    }

    pub fn sigma2(&self, t: i64) -> Option<f64> {
        self.idx(t).map(|k| self.sigma2[k])
    }

    pub fn mu_bar(&self, t: i64) -> Option<f64> {
        usize::try_from(t).ok().and_then(|k| self.mu_bar.get(k).copied())
    }

    pub fn mean_error(&self, t: i64) -> Option<f64> {
        usize::try_from(t).ok().and_then(|k| self.mean_error.get(k).copied())
    }
}

/// The shared observation path with its exact and perturbed variance filters.
#[derive(Debug, Clone)]
pub struct JointFilter {
    pub exact: Arc<VarianceFilter>,
    pub perturbed: Arc<VarianceFilter>,
    /// `Y_t` for `t ∈ [−burn_in, horizon]`.
    pub observations: Trajectory,
    pub path: Arc<JointPath>,
}

pub fn make_joint_filter(
    params: JointFilterParams,
    seed: impl Into<StreamSeed>,
    horizon: usize,
) -> Result<JointFilter> {
    params.validate()?;
    if horizon == 0 {
        return Err(SreError::config("joint filter horizon must be >= 1"));
    }
    let seed = seed.into();
    let path = Arc::new(simulate_path(&params, seed, horizon)?);
    let source_id = fnv1a([3, seed.seed, seed.replicate, params.burn_in as u64]);
    let space = Arc::new(StateSpace::half_line());
    let info = |variant| SequenceInfo {
        model_id: MODEL_ID.into(),
        seed: seed.seed,
        replicate: seed.replicate,
        variant,
        source_id,
        degenerate_noise: params.noise.is_degenerate(),
    };
    let observations = Trajectory {
        t0: path.t0,
        states: path.y.iter().map(|&y| vec![y]).collect(),
        meta: TrajectoryMeta {
            model_id: format!("{MODEL_ID}_observations"),
            seed: seed.seed,
            replicate: seed.replicate,
            variant: Variant::Exact,
            y0: vec![path.y[0]],
        },
    };
    Ok(JointFilter {
        exact: Arc::new(VarianceFilter {
            params,
            path: path.clone(),
            space: space.clone(),
            info: info(Variant::Exact),
        }),
        perturbed: Arc::new(VarianceFilter {
            params,
            path: path.clone(),
            space,
            info: info(Variant::Perturbed),
        }),
        observations,
        path,
    })
}

fn simulate_path(p: &JointFilterParams, seed: StreamSeed, horizon: usize) -> Result<JointPath> {
    let t0 = -(p.burn_in as i64);
    let len = p.burn_in + horizon + 1;
    let mut y = Vec::with_capacity(len);
    let mut mu = Vec::with_capacity(len);
    let mut sigma2 = Vec::with_capacity(len);
    // arbitrary feasible start, forgotten during burn-in
    let (mut m, mut s2) = (p.omega_mu, p.omega_sigma);
    let mut yt = m + s2.sqrt() * p.noise.at(seed, t0);
    y.push(yt);
    mu.push(m);
    sigma2.push(s2);
    for k in 1..len {
        let t = t0 + k as i64;
        let resid = yt - m;
        m = p.omega_mu + p.alpha_mu * yt + p.beta_mu * m;
        s2 = p.omega_sigma + p.alpha_sigma * resid * resid + p.beta_sigma * s2;
        yt = m + s2.sqrt() * p.noise.at(seed, t);
        if !(m.is_finite() && s2.is_finite() && yt.is_finite()) {
            return Err(SreError::Numeric {
                time: Some(t),
                detail: format!("{MODEL_ID} data path diverged"),
            });
        }
        y.push(yt);
        mu.push(m);
        sigma2.push(s2);
    }
    let zero = p.burn_in;
    let mut mu_bar = Vec::with_capacity(horizon + 1);
    let mut mean_error = Vec::with_capacity(horizon + 1);
    mu_bar.push(p.mu_init);
    mean_error.push(p.mu_init - mu[zero]);
    for k in 1..=horizon {
        let prev = mu_bar[k - 1];
        mu_bar.push(p.omega_mu + p.alpha_mu * y[zero + k - 1] + p.beta_mu * prev);
        mean_error.push(p.beta_mu * mean_error[k - 1]);
    }
    Ok(JointPath {
        t0,
        y,
        mu,
        sigma2,
        mu_bar,
        mean_error,
    })
}

/// `σ² ↦ ω_σ + α_σ·(Y_{t−1} − m_{t−1})² + β_σ·σ²` with `m = μ` (exact)
/// or `m = μ̄` (perturbed).
#[derive(Debug)]
pub struct VarianceFilter {
    params: JointFilterParams,
    path: Arc<JointPath>,
    space: Arc<StateSpace>,
    info: SequenceInfo,
}

impl VarianceFilter {
    pub fn path(&self) -> &Arc<JointPath> {
        &self.path
    }

    pub fn params(&self) -> &JointFilterParams {
        &self.params
    }

    /// Times `t` at which `Φ_t` is defined.
    pub fn t_range(&self) -> (i64, i64) {
        let (lo, hi) = self.path.t_range();
        match self.info.variant {
            Variant::Exact => (lo + 1, hi),
            Variant::Perturbed => (1, hi),
        }
    }

    fn out_of_range(&self, t: i64) -> SreError {
        let (lo, hi) = self.t_range();
        SreError::config(format!(
            "{} {} variance filter defined for t in [{lo}, {hi}], requested t = {t}",
            MODEL_ID, self.info.variant
        ))
    }

    fn mean_at(&self, t: i64) -> Option<f64> {
        match self.info.variant {
            Variant::Exact => self.path.mu(t),
            Variant::Perturbed => self.path.mu_bar(t),
        }
    }
}

impl MapSequence for VarianceFilter {
    fn info(&self) -> &SequenceInfo {
        &self.info
    }

    fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    fn time_range(&self) -> Option<(i64, i64)> {
        Some(self.t_range())
    }

    fn map_at(&self, t: i64) -> Result<RandomMap> {
        let (lo, hi) = self.t_range();
        if t < lo || t > hi {
            return Err(self.out_of_range(t));
        }
        let y = self.path.y(t - 1).expect("in range");
        let m = self.mean_at(t - 1).expect("in range");
        let p = &self.params;
        let a = p.omega_sigma + p.alpha_sigma * (y - m) * (y - m);
        Ok(RandomMap::affine(self.space.clone(), AffineMap::scalar(a, p.beta_sigma))?.at_time(t))
    }

    /// `α_σ·e·(e − 2·(Y − μ))` at `t − 1`, with `e = μ̄ − μ` from the error
    /// recursion; equal to the intercept gap without cancelling two squares.
    fn deviation_at(&self, t: i64) -> Option<Result<MapDifference>> {
        if self.info.variant != Variant::Perturbed {
            return None;
        }
        let (lo, hi) = self.t_range();
        if t < lo || t > hi {
            return Some(Err(self.out_of_range(t)));
        }
        let y = self.path.y(t - 1)?;
        let mu = self.path.mu(t - 1)?;
        let e = self.path.mean_error(t - 1)?;
        let gap = self.params.alpha_sigma * e * (e - 2.0 * (y - mu));
        Some(Ok(MapDifference::affine(
            DVector::from_element(1, gap),
            DMatrix::zeros(1, 1),
        )))
    }

    fn is_stationary(&self) -> bool {
        self.info.variant == Variant::Exact
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lipschitz::lipschitz_difference;

    #[test]
    fn exact_and_perturbed_share_slope() {
        let jf = make_joint_filter(JointFilterParams::default(), 17, 100).unwrap();
        for t in 1..=100 {
            let f = jf.exact.map_at(t).unwrap();
            let g = jf.perturbed.map_at(t).unwrap();
            assert_eq!(lipschitz_difference(&g, &f, None).unwrap().value, 0.0);
        }
    }

    #[test]
    fn intercept_gap_is_forced_algebra() {
        let p = JointFilterParams::default();
        let jf = make_joint_filter(p, 5, 50).unwrap();
        for t in 1..=50 {
            let y = jf.path.y(t - 1).unwrap();
            let mu = jf.path.mu(t - 1).unwrap();
            let mb = jf.path.mu_bar(t - 1).unwrap();
            let expect = p.alpha_sigma * ((y - mb).powi(2) - (y - mu).powi(2)).abs();
            let a = jf.exact.map_at(t).unwrap().as_affine().unwrap().intercept[0];
            let b = jf.perturbed.map_at(t).unwrap().as_affine().unwrap().intercept[0];
            assert!(((b - a).abs() - expect).abs() <= 1e-14 * (1.0 + expect));
            let dev = jf.perturbed.deviation_at(t).unwrap().unwrap();
            let d = dev.as_affine().unwrap().intercept[0];
            assert!((d - (b - a)).abs() <= 1e-13 * (1.0 + d.abs()), "t={t}: {d} vs {}", b - a);
        }
    }

    #[test]
    fn mean_error_is_geometric() {
        let base = JointFilterParams::default();
        let probe = make_joint_filter(base, 23, 60).unwrap();
        let mu0 = probe.path.mu(0).unwrap();
        let p = JointFilterParams { mu_init: mu0 + 1.0, beta_mu: 0.5, ..base };
        let jf = make_joint_filter(p, 23, 60).unwrap();
        for t in 0..=60 {
            let expect = 0.5_f64.powi(t as i32);
            let e = jf.path.mean_error(t).unwrap();
            assert!((e - expect).abs() <= 1e-10 * expect);
            // the directly simulated initialized mean agrees while representable
            let naive = jf.path.mu_bar(t).unwrap() - jf.path.mu(t).unwrap();
            assert!((naive - expect).abs() <= 1e-14);
        }
    }

    #[test]
    fn perturbed_range_starts_at_one() {
        let jf = make_joint_filter(JointFilterParams::default(), 1, 10).unwrap();
        assert!(jf.perturbed.map_at(0).is_err());
        assert!(jf.exact.map_at(0).is_ok());
        assert!(jf.exact.map_at(-999).is_ok());
        assert!(jf.exact.map_at(-1000).is_err());
        assert!(jf.exact.map_at(11).is_err());
        assert_eq!(jf.observations.t0, -1000);
    }

    #[test]
    fn invalid_parameters() {
        let bad = JointFilterParams { omega_sigma: -1.0, ..Default::default() };
        let err = make_joint_filter(bad, 1, 10).unwrap_err();
        assert!(err.to_string().contains("omega_sigma"));
        let bad = JointFilterParams { sigma2_init: -0.5, ..Default::default() };
        assert!(make_joint_filter(bad, 1, 10).is_err());
    }
}
