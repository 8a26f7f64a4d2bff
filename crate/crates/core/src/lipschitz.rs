//! Lipschitz coefficients `Λ(Φ)` and `Λ(Φ̂ − Φ)`.
//!
//! Affine maps have exact coefficients (induced operator norms). For maps
//! known only through evaluation, the coefficient is estimated as the largest
//! difference quotient over random pairs drawn from a probe box; such a value
//! is a lower bound on `Λ` and is labelled [`WitnessKind::SampledLowerBound`].

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Result, SreError};
use crate::map::{AffineMap, ComposedMap, RandomMap};
use crate::rng::{Domain, StreamSeed};
use crate::space::{vector_norm, StateSpace};

const PAIRS_PER_STREAM: usize = 256;

/// How much trust a reported coefficient deserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Exact,
    /// A product of factor coefficients; never below the true value.
    UpperBound,
    /// Maximum of sampled difference quotients; never above the true value.
    SampledLowerBound,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Exact => "exact",
            WitnessKind::UpperBound => "upper_bound",
            WitnessKind::SampledLowerBound => "sampled_lower_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate {
    pub value: f64,
    pub witness: WitnessKind,
    /// Sampled lower bound reported alongside an upper bound.
    pub sampled_lower: Option<f64>,
}

impl LipschitzEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value,
            witness: WitnessKind::Exact,
            sampled_lower: None,
        }
    }
}

/// Box and sample budget for difference-quotient estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePlan {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub n_pairs: usize,
    pub seed: u64,
    /// Also draw pairs at distance `1e-4 · diameter` to catch local steepness.
    pub nearby_pairs: bool,
}

impl ProbePlan {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, n_pairs: usize, seed: u64) -> Self {
        Self {
            lower,
            upper,
            n_pairs,
            seed,
            nearby_pairs: true,
        }
    }

    /// Checks the box lies in `space`, is bounded and has positive volume.
    pub fn validate(&self, space: &StateSpace) -> Result<()> {
        if self.n_pairs == 0 {
            return Err(SreError::config("probe plan needs at least one pair"));
        }
        if self.lower.len() != space.dim() || self.upper.len() != space.dim() {
            return Err(SreError::Dimension {
                expected: space.dim(),
                got: self.lower.len().min(self.upper.len()),
            });
        }
        space.check_member(&self.lower)?;
        space.check_member(&self.upper)?;
        for (i, (&lo, &hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(SreError::config(format!("probe box coordinate {i} is unbounded")));
            }
            if hi <= lo {
                return Err(SreError::config(format!(
                    "probe box coordinate {i} is degenerate: [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// Largest `‖f(x) − f(y)‖ / ‖x − y‖` over the sampled pairs.
    ///
    /// `f` maps into the ambient `R^dim` (it may be a difference of maps).
    pub fn max_quotient<F>(&self, space: &StateSpace, f: F) -> Result<f64>
    where
        F: Fn(&[f64]) -> Vec<f64> + Sync,
    {
        self.validate(space)?;
        let kind = space.norm_kind();
        let width: Vec<f64> = self.upper.iter().zip(&self.lower).map(|(u, l)| u - l).collect();
        let step = 1e-4 * vector_norm(kind, &width);
        let n_streams = self.n_pairs.div_ceil(PAIRS_PER_STREAM);
        let seed = StreamSeed::new(self.seed);
        let best = (0..n_streams)
            .into_par_iter()
            .map(|chunk| {
                let mut rng = seed.stream(Domain::Probe, chunk as i64);
                let count = PAIRS_PER_STREAM.min(self.n_pairs - chunk * PAIRS_PER_STREAM);
                let mut best = 0.0_f64;
                for _ in 0..count {
                    let x = self.draw(&mut rng);
                    let fx = f(&x);
                    let y = self.draw(&mut rng);
                    best = best.max(quotient(kind, &x, &fx, &y, &f));
                    if self.nearby_pairs {
                        let z: Vec<f64> = x
                            .iter()
                            .zip(self.lower.iter().zip(&self.upper))
                            .map(|(&v, (&lo, &hi))| {
                                // offsets in [step/2, step] keep the quotient well conditioned
                                let h = step * (0.5 + 0.5 * rng.random::<f64>());
                                let h = if rng.random::<bool>() { h } else { -h };
                                let z = if (lo..=hi).contains(&(v + h)) { v + h } else { v - h };
                                z.clamp(lo, hi)
                            })
                            .collect();
                        best = best.max(quotient(kind, &x, &fx, &z, &f));
                    }
                }
                best
            })
            .reduce(|| 0.0, f64::max);
        if !best.is_finite() {
            return Err(SreError::Numeric {
                time: None,
                detail: "non-finite difference quotient".into(),
            });
        }
        Ok(best)
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| lo + (hi - lo) * rng.random::<f64>())
            .collect()
    }
}

fn quotient<F>(kind: crate::space::NormKind, x: &[f64], fx: &[f64], y: &[f64], f: &F) -> f64
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let dx: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let denom = vector_norm(kind, &dx);
    if denom == 0.0 {
        return 0.0;
    }
    let fy = f(y);
    let df: Vec<f64> = fx.iter().zip(&fy).map(|(a, b)| a - b).collect();
    vector_norm(kind, &df) / denom
}

/// `Λ(Φ)` for a single map.
pub fn lipschitz_coefficient(map: &RandomMap, probe: Option<&ProbePlan>) -> Result<LipschitzEstimate> {
    if let Some(value) = map.exact_lipschitz() {
        return Ok(LipschitzEstimate::exact(value));
    }
    let plan = probe.ok_or_else(|| SreError::config("a probe plan is required for maps without a known coefficient"))?;
    let value = plan.max_quotient(map.space(), |y| map.apply_unchecked(y))?;
    Ok(LipschitzEstimate {
        value,
        witness: WitnessKind::SampledLowerBound,
        sampled_lower: Some(value),
    })
}

/// `Λ(Φ^(r))` for a composition: exact when every factor is affine, else the
/// product upper bound (when factor coefficients are known) together with a
/// sampled lower bound (when a probe plan is given).
pub fn composed_lipschitz(map: &ComposedMap, probe: Option<&ProbePlan>) -> Result<LipschitzEstimate> {
    if let Some(value) = map.exact_lipschitz() {
        return Ok(LipschitzEstimate::exact(value));
    }
    let sampled = probe
        .map(|plan| {
            plan.max_quotient(map.space(), |y| {
                map.factors()
                    .iter()
                    .rev()
                    .fold(y.to_vec(), |state, f| f.apply_unchecked(&state))
            })
        })
        .transpose()?;
    match (map.lipschitz_upper(), sampled) {
        (Some(upper), lower) => Ok(LipschitzEstimate {
            value: upper,
            witness: WitnessKind::UpperBound,
            sampled_lower: lower,
        }),
        (None, Some(lower)) => Ok(LipschitzEstimate {
            value: lower,
            witness: WitnessKind::SampledLowerBound,
            sampled_lower: Some(lower),
        }),
        (None, None) => Err(SreError::config(
            "a probe plan is required for compositions of maps without known coefficients",
        )),
    }
}

/// `Φ̂ − Φ` as a map into the ambient space.
#[derive(Debug, Clone)]
pub enum MapDifference {
    /// `y ↦ Δa + ΔB·y`.
    Affine(AffineMap),
    General { perturbed: RandomMap, exact: RandomMap },
}

impl MapDifference {
    /// Subtracts intercepts and slopes when both maps are affine.
    pub fn between(perturbed: &RandomMap, exact: &RandomMap) -> Result<Self> {
        if **perturbed.space() != **exact.space() {
            return Err(SreError::config("map difference requires a shared state space"));
        }
        Ok(match (perturbed.as_affine(), exact.as_affine()) {
            (Some(p), Some(e)) => MapDifference::Affine(AffineMap {
                intercept: &p.intercept - &e.intercept,
                slope: &p.slope - &e.slope,
            }),
            _ => MapDifference::General {
                perturbed: perturbed.clone(),
                exact: exact.clone(),
            },
        })
    }

    /// Affine difference with an intercept gap computed by the caller
    /// without cancellation.
    pub fn affine(intercept_gap: DVector<f64>, slope_gap: DMatrix<f64>) -> Self {
        MapDifference::Affine(AffineMap {
            intercept: intercept_gap,
            slope: slope_gap,
        })
    }

    /// `Φ̂(y) − Φ(y)`.
    pub fn evaluate(&self, y: &[f64]) -> Vec<f64> {
        match self {
            MapDifference::Affine(a) => a.apply(y),
            MapDifference::General { perturbed, exact } => perturbed
                .apply_unchecked(y)
                .iter()
                .zip(exact.apply_unchecked(y))
                .map(|(p, e)| p - e)
                .collect(),
        }
    }

    pub fn as_affine(&self) -> Option<&AffineMap> {
        match self {
            MapDifference::Affine(a) => Some(a),
            MapDifference::General { .. } => None,
        }
    }
}

/// `Λ(f − g)` under the same exactness rules as [`lipschitz_coefficient`].
pub fn lipschitz_difference(
    f: &RandomMap,
    g: &RandomMap,
    probe: Option<&ProbePlan>,
) -> Result<LipschitzEstimate> {
    let diff = MapDifference::between(f, g)?;
    difference_coefficient(&diff, f.space(), probe)
}

pub fn difference_coefficient(
    diff: &MapDifference,
    space: &StateSpace,
    probe: Option<&ProbePlan>,
) -> Result<LipschitzEstimate> {
    match diff {
        MapDifference::Affine(a) => Ok(LipschitzEstimate::exact(space.operator_norm(&a.slope))),
        MapDifference::General { .. } => {
            let plan = probe.ok_or_else(|| {
                SreError::config("a probe plan is required for differences of general maps")
            })?;
            let value = plan.max_quotient(space, |y| diff.evaluate(y))?;
            Ok(LipschitzEstimate {
                value,
                witness: WitnessKind::SampledLowerBound,
                sampled_lower: Some(value),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::map::{compose, GeneralMap};
    use proptest::prelude::*;

    fn scalar(space: &Arc<StateSpace>, a: f64, b: f64) -> RandomMap {
        RandomMap::affine(space.clone(), AffineMap::scalar(a, b)).unwrap()
    }

    fn square_map() -> RandomMap {
        let space = Arc::new(StateSpace::half_line());
        RandomMap::general(space, GeneralMap::new("square", None, |y| vec![y[0] * y[0]]))
    }

    /// Dense-grid supremum of the difference quotient of y² on [0, 2]².
    fn grid_oracle(n: usize) -> f64 {
        let pts: Vec<f64> = (0..=n).map(|i| 2.0 * i as f64 / n as f64).collect();
        let mut best = 0.0_f64;
        for &x in &pts {
            for &y in &pts {
                if x != y {
                    best = best.max((x * x - y * y).abs() / (x - y).abs());
                }
            }
        }
        best
    }

    #[test]
    fn affine_coefficients_are_exact() {
        let line = Arc::new(StateSpace::real(1));
        let est = lipschitz_coefficient(&scalar(&line, 3.0, -0.8), None).unwrap();
        assert_eq!(est.value, 0.8);
        assert_eq!(est.witness, WitnessKind::Exact);
        let c = compose(vec![scalar(&line, 0.0, 0.5), scalar(&line, 0.0, 0.4)]).unwrap();
        let est = composed_lipschitz(&c, None).unwrap();
        assert!((est.value - 0.2).abs() < 1e-15);
        assert_eq!(est.witness, WitnessKind::Exact);
    }

    #[test]
    fn sampled_square_approaches_grid_supremum() {
        let oracle = grid_oracle(2000);
        let plan = ProbePlan::new(vec![0.0], vec![2.0], 100_000, 11);
        let est = lipschitz_coefficient(&square_map(), Some(&plan)).unwrap();
        assert_eq!(est.witness, WitnessKind::SampledLowerBound);
        assert!(est.value <= 4.0);
        assert!((est.value - oracle).abs() < 1e-2, "{} vs {}", est.value, oracle);
    }

    #[test]
    fn general_map_needs_probe() {
        assert!(matches!(lipschitz_coefficient(&square_map(), None), Err(SreError::Config(_))));
    }

    #[test]
    fn probe_box_validation() {
        let space = StateSpace::half_line();
        let outside = ProbePlan::new(vec![-1.0], vec![2.0], 10, 0);
        assert!(matches!(outside.validate(&space), Err(SreError::Domain { .. })));
        let flat = ProbePlan::new(vec![1.0], vec![1.0], 10, 0);
        assert!(matches!(flat.validate(&space), Err(SreError::Config(_))));
    }

    #[test]
    fn affine_difference() {
        let half = Arc::new(StateSpace::half_line());
        let est = lipschitz_difference(&scalar(&half, 0.3, 0.7), &scalar(&half, 0.1, 0.5), None).unwrap();
        assert!((est.value - 0.2).abs() < 1e-15);
        assert_eq!(est.witness, WitnessKind::Exact);
        let same = lipschitz_difference(&scalar(&half, 0.5, 0.7), &scalar(&half, 0.9, 0.7), None).unwrap();
        assert_eq!(same.value, 0.0);
        let sq = square_map();
        let plan = ProbePlan::new(vec![0.0], vec![2.0], 1000, 3);
        assert_eq!(lipschitz_difference(&sq, &sq, Some(&plan)).unwrap().value, 0.0);
    }

    #[test]
    fn composition_of_general_maps_reports_both_bounds() {
        let half = Arc::new(StateSpace::half_line());
        let known = RandomMap::general(
            half.clone(),
            GeneralMap::new("sqrt1p", Some(0.5), |y| vec![(1.0 + y[0]).sqrt()]),
        );
        let c = compose(vec![known.clone(), known]).unwrap();
        let plan = ProbePlan::new(vec![0.0], vec![4.0], 20_000, 5);
        let est = composed_lipschitz(&c, Some(&plan)).unwrap();
        assert_eq!(est.witness, WitnessKind::UpperBound);
        assert_eq!(est.value, 0.25);
        let lower = est.sampled_lower.unwrap();
        assert!(lower <= est.value && lower > 0.1);
    }

    proptest! {
        #[test]
        fn submultiplicative_and_reverse_triangle(
            b1 in -2.0f64..2.0, b2 in -2.0f64..2.0,
            m in prop::collection::vec(-1.0f64..1.0, 4),
            n in prop::collection::vec(-1.0f64..1.0, 4),
        ) {
            let line = Arc::new(StateSpace::real(1));
            let f = scalar(&line, 0.3, b1);
            let g = scalar(&line, -1.0, b2);
            let lf = f.exact_lipschitz().unwrap();
            let lg = g.exact_lipschitz().unwrap();
            let fg = compose(vec![f.clone(), g.clone()]).unwrap().exact_lipschitz().unwrap();
            prop_assert!((fg - lf * lg).abs() <= 1e-15 * (1.0 + lf * lg));
            let d = lipschitz_difference(&f, &g, None).unwrap().value;
            prop_assert!((lf - lg).abs() <= d + 1e-15);

            let plane = Arc::new(StateSpace::real(2));
            let mk = |v: &[f64]| RandomMap::affine(
                plane.clone(),
                AffineMap::new(DVector::zeros(2), DMatrix::from_row_slice(2, 2, v)).unwrap(),
            ).unwrap();
            let (p, q) = (mk(&m), mk(&n));
            let (lp, lq) = (p.exact_lipschitz().unwrap(), q.exact_lipschitz().unwrap());
            let pq = compose(vec![p.clone(), q.clone()]).unwrap().exact_lipschitz().unwrap();
            prop_assert!(pq <= lp * lq * (1.0 + 1e-12) + 1e-15);
            let d = lipschitz_difference(&p, &q, None).unwrap().value;
            prop_assert!((lp - lq).abs() <= d * (1.0 + 1e-12) + 1e-15);
        }

        #[test]
        fn sampled_bound_never_exceeds_exact(b in -3.0f64..3.0, seed in any::<u64>()) {
            let line = Arc::new(StateSpace::real(1));
            let f = scalar(&line, 0.5, b);
            let plan = ProbePlan::new(vec![-5.0], vec![5.0], 300, seed);
            let sampled = plan.max_quotient(&line, |y| f.apply_unchecked(y)).unwrap();
            // nearby pairs resolve f(x) − f(z) only to a few ulps of |f| over |x − z| ≈ 1e-3
            prop_assert!(sampled <= f.exact_lipschitz().unwrap() * (1.0 + 1e-9) + 1e-10, "{} vs {}", sampled, f.exact_lipschitz().unwrap());
        }
    }
}
