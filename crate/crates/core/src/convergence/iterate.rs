use crate::error::{Result, SreError};
use crate::map::RandomMap;
use crate::sequence::MapSequence;
use crate::trajectory::{Trajectory, TrajectoryMeta};

/// `y_k = Φ_k(y_{k−1})` for `k = 1..=horizon`, starting from `y_0 = y0`.
pub fn iterate_forward(seq: &dyn MapSequence, y0: &[f64], horizon: usize) -> Result<Trajectory> {
    iterate_forward_from(seq, 0, y0, horizon)
}

/// Same as [`iterate_forward`] with `y0` placed at time `t0`.
pub fn iterate_forward_from(
    seq: &dyn MapSequence,
    t0: i64,
    y0: &[f64],
    horizon: usize,
) -> Result<Trajectory> {
    seq.space().check_member(y0).map_err(|e| e.at_time(t0))?;
    let mut states = Vec::with_capacity(horizon + 1);
    states.push(y0.to_vec());
    for k in 1..=horizon as i64 {
        let t = t0 + k;
        let next = seq.map_at(t)?.evaluate(states.last().expect("nonempty"))?;
        states.push(next);
    }
    Ok(Trajectory {
        t0,
        states,
        meta: TrajectoryMeta::from_info(seq.info(), y0),
    })
}

/// `Φ_t^(n)(y) = Φ_t ∘ ⋯ ∘ Φ_{t−n+1}(y)`.
pub fn backward_approximant(seq: &dyn MapSequence, y: &[f64], n: usize, t: i64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(SreError::config("backward approximant needs n >= 1"));
    }
    seq.space().check_member(y)?;
    let mut state = y.to_vec();
    for s in (t - n as i64 + 1)..=t {
        state = seq.map_at(s)?.evaluate(&state)?;
    }
    Ok(state)
}

/// Two states driven by the same maps, with their difference tracked so it
/// keeps full relative precision long after it drops below the rounding
/// level of the states themselves.
#[derive(Debug, Clone)]
pub(crate) struct CoupledState {
    pub base: Vec<f64>,
    pub other: Vec<f64>,
    /// `other − base`.
    pub delta: Vec<f64>,
}

impl CoupledState {
    pub fn new(base: Vec<f64>, other: Vec<f64>) -> Self {
        let delta = other.iter().zip(&base).map(|(o, b)| o - b).collect();
        Self { base, other, delta }
    }

    /// For affine maps `Φ(x') − Φ(x) = B·(x' − x)`.
    pub fn step(&mut self, map: &RandomMap) -> Result<()> {
        let base = map.evaluate(&self.base)?;
        let other = map.evaluate(&self.other)?;
        self.delta = match map.as_affine() {
            Some(a) => a.apply_linear(&self.delta),
            None => other.iter().zip(&base).map(|(o, b)| o - b).collect(),
        };
        self.base = base;
        self.other = other;
        Ok(())
    }
}

/// `‖Φ_t^(n+1)(y) − Φ_t^(n)(y)‖`: the states `Φ_{t−n}(y)` and `y` pushed
/// through the same maps `Φ_{t−n+1}, …, Φ_t`.
pub fn approximant_gap(seq: &dyn MapSequence, y: &[f64], n: usize, t: i64) -> Result<f64> {
    if n == 0 {
        return Err(SreError::config("approximant gap needs n >= 1"));
    }
    seq.space().check_member(y)?;
    let first = t - n as i64;
    let head = seq.map_at(first)?.evaluate(y)?;
    let mut pair = CoupledState::new(y.to_vec(), head);
    for s in (first + 1)..=t {
        pair.step(&seq.map_at(s)?)?;
    }
    Ok(seq.space().norm(&pair.delta))
}
