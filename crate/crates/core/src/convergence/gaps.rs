use crate::error::{Result, SreError};
use crate::sequence::{difference_at, MapSequence};

use super::iterate::CoupledState;

/// Gaps at or below this value are excluded from log-linear fits.
pub const GAP_FLOOR: f64 = 1e-280;

/// Nonnegative gaps `g_t` for consecutive `t` starting at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    pub t0: i64,
    pub gaps: Vec<f64>,
    pub floored: Vec<bool>,
}

impl GapSeries {
    pub fn new(t0: i64, gaps: Vec<f64>) -> Result<Self> {
        if let Some((k, &g)) = gaps.iter().enumerate().find(|(_, g)| !(**g >= 0.0)) {
            return Err(SreError::Numeric {
                time: Some(t0 + k as i64),
                detail: format!("gap must be a nonnegative number, got {g}"),
            });
        }
        let floored = gaps.iter().map(|&g| g < GAP_FLOOR).collect();
        Ok(Self { t0, gaps, floored })
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.gaps.len() as i64).map(move |k| self.t0 + k)
    }

    pub fn at(&self, t: i64) -> Option<f64> {
        usize::try_from(t - self.t0).ok().and_then(|k| self.gaps.get(k).copied())
    }

    /// `(t, gap, floored)` rows with a header.
    pub fn to_csv(&self, comment: &str) -> String {
        let mut out = format!("# {comment}\nt,gap,floored\n");
        for ((t, g), f) in self.times().zip(&self.gaps).zip(&self.floored) {
            out.push_str(&format!("{t},{g:e},{}\n", u8::from(*f)));
        }
        out
    }
}

/// `g_t = ‖y_t − y'_t‖` for two initial states driven by the same maps.
pub fn coupling_gap(seq: &dyn MapSequence, y0: &[f64], y0_prime: &[f64], horizon: usize) -> Result<GapSeries> {
    let space = seq.space();
    space.check_member(y0).map_err(|e| e.at_time(0))?;
    space.check_member(y0_prime).map_err(|e| e.at_time(0))?;
    let mut pair = CoupledState::new(y0.to_vec(), y0_prime.to_vec());
    let mut gaps = Vec::with_capacity(horizon + 1);
    gaps.push(space.norm(&pair.delta));
    for t in 1..=horizon as i64 {
        pair.step(&seq.map_at(t)?)?;
        gaps.push(space.norm(&pair.delta));
    }
    GapSeries::new(0, gaps)
}

/// `g_t = ‖Ŷ_t − Y_t‖` with `Y` driven by `exact` from `y0` and `Ŷ` by
/// `perturbed` from `y0_hat`.
///
/// For affine maps the gap obeys `d_t = (Φ̂_t − Φ_t)(Ŷ_{t−1}) + B_t·d_{t−1}`,
/// which is what is propagated.
pub fn perturbed_gap(
    exact: &dyn MapSequence,
    perturbed: &dyn MapSequence,
    y0: &[f64],
    y0_hat: &[f64],
    horizon: usize,
) -> Result<GapSeries> {
    check_paired(exact, perturbed)?;
    let space = exact.space();
    space.check_member(y0).map_err(|e| e.at_time(0))?;
    space.check_member(y0_hat).map_err(|e| e.at_time(0))?;
    let mut y = y0.to_vec();
    let mut y_hat = y0_hat.to_vec();
    let mut delta: Vec<f64> = y_hat.iter().zip(&y).map(|(a, b)| a - b).collect();
    let mut gaps = Vec::with_capacity(horizon + 1);
    gaps.push(space.norm(&delta));
    for t in 1..=horizon as i64 {
        let phi = exact.map_at(t)?;
        let phi_hat = perturbed.map_at(t)?;
        let next = phi.evaluate(&y)?;
        let next_hat = phi_hat.evaluate(&y_hat)?;
        delta = match phi.as_affine() {
            Some(a) => {
                let diff = difference_at(exact, perturbed, t)?;
                match diff.as_affine() {
                    Some(_) => diff
                        .evaluate(&y_hat)
                        .iter()
                        .zip(a.apply_linear(&delta))
                        .map(|(d, b)| d + b)
                        .collect(),
                    None => next_hat.iter().zip(&next).map(|(a, b)| a - b).collect(),
                }
            }
            None => next_hat.iter().zip(&next).map(|(a, b)| a - b).collect(),
        };
        y = next;
        y_hat = next_hat;
        gaps.push(space.norm(&delta));
    }
    GapSeries::new(0, gaps)
}

/// Perturbed and exact filters may only be compared on the same data.
pub fn check_paired(exact: &dyn MapSequence, perturbed: &dyn MapSequence) -> Result<()> {
    let (a, b) = (exact.info(), perturbed.info());
    if a.seed != b.seed || a.replicate != b.replicate || a.source_id != b.source_id {
        return Err(SreError::config(format!(
            "exact ({}, seed {}, replicate {}) and perturbed ({}, seed {}, replicate {}) sequences are driven by different data",
            a.model_id, a.seed, a.replicate, b.model_id, b.seed, b.replicate
        )));
    }
    if **exact.space() != **perturbed.space() {
        return Err(SreError::config("exact and perturbed sequences live on different state spaces"));
    }
    Ok(())
}
