//! Deterministic affine schedules `Φ_t(y) = a_{t mod k} + b_{t mod k}·y`.
//!
//! A deterministic sequence is stationary only when it is constant, so
//! schedules whose entries differ are rejected.

use std::sync::Arc;

use crate::error::{Result, SreError};
use crate::map::{AffineMap, RandomMap};
use crate::sequence::{MapSequence, SequenceInfo, Variant};
use crate::space::StateSpace;
use crate::trajectory::fnv1a;

pub const MODEL_ID: &str = "affine_schedule";

#[derive(Debug, Clone)]
pub struct AffineSchedule {
    intercept: f64,
    slope: f64,
    space: Arc<StateSpace>,
    info: SequenceInfo,
}

pub fn make_affine_schedule(intercepts: &[f64], slopes: &[f64]) -> Result<AffineSchedule> {
    if intercepts.is_empty() || intercepts.len() != slopes.len() {
        return Err(SreError::config("schedule needs matching, nonempty intercept and slope lists"));
    }
    let constant = |v: &[f64]| v.iter().all(|x| x.to_bits() == v[0].to_bits());
    if !constant(intercepts) || !constant(slopes) {
        return Err(SreError::config(
            "a deterministic schedule with varying entries is not stationary",
        ));
    }
    if !(intercepts[0].is_finite() && slopes[0].is_finite()) {
        return Err(SreError::config("schedule entries must be finite"));
    }
    Ok(AffineSchedule {
        intercept: intercepts[0],
        slope: slopes[0],
        space: Arc::new(StateSpace::real(1)),
        info: SequenceInfo {
            model_id: MODEL_ID.into(),
            seed: 0,
            replicate: 0,
            variant: Variant::Exact,
            source_id: fnv1a([4, intercepts[0].to_bits(), slopes[0].to_bits()]),
            degenerate_noise: false,
        },
    })
}

impl MapSequence for AffineSchedule {
    fn info(&self) -> &SequenceInfo {
        &self.info
    }

    fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    fn map_at(&self, t: i64) -> Result<RandomMap> {
        Ok(RandomMap::affine(self.space.clone(), AffineMap::scalar(self.intercept, self.slope))?.at_time(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_slopes_rejected() {
        let err = make_affine_schedule(&[0.0, 0.0], &[0.5, 2.0]).unwrap_err();
        assert!(err.to_string().contains("not stationary"));
    }

    #[test]
    fn constant_schedule_accepted() {
        let s = make_affine_schedule(&[1.0, 1.0], &[0.5, 0.5]).unwrap();
        assert_eq!(s.map_at(3).unwrap().evaluate(&[2.0]).unwrap(), vec![2.0]);
    }
}
