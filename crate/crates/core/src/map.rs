//! Realized random maps `Φ_t`, their compositions `Φ_t^(r)`, and evaluation.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Result, SreError};
use crate::space::StateSpace;

/// `y ↦ a + B·y`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub intercept: DVector<f64>,
    pub slope: DMatrix<f64>,
}

impl AffineMap {
    pub fn new(intercept: DVector<f64>, slope: DMatrix<f64>) -> Result<Self> {
        let d = intercept.len();
        if slope.nrows() != d || slope.ncols() != d {
            return Err(SreError::Dimension {
                expected: d,
                got: slope.nrows().max(slope.ncols()),
            });
        }
        Ok(Self { intercept, slope })
    }

    /// One-dimensional `y ↦ a + b·y`.
    pub fn scalar(a: f64, b: f64) -> Self {
        Self {
            intercept: DVector::from_element(1, a),
            slope: DMatrix::from_element(1, 1, b),
        }
    }

    pub fn dim(&self) -> usize {
        self.intercept.len()
    }

    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        if self.dim() == 1 {
            return vec![self.intercept[0] + self.slope[(0, 0)] * y[0]];
        }
        let v = DVector::from_column_slice(y);
        (&self.intercept + &self.slope * v).iter().copied().collect()
    }

    /// `B·δ`: the image of a difference of two states.
    pub fn apply_linear(&self, delta: &[f64]) -> Vec<f64> {
        if self.dim() == 1 {
            return vec![self.slope[(0, 0)] * delta[0]];
        }
        (&self.slope * DVector::from_column_slice(delta))
            .iter()
            .copied()
            .collect()
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            intercept: &self.intercept + &self.slope * &inner.intercept,
            slope: &self.slope * &inner.slope,
        }
    }
}

type EvalFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// A map given only through its evaluation rule.
#[derive(Clone)]
pub struct GeneralMap {
    eval: Arc<EvalFn>,
    lipschitz: Option<f64>,
    label: String,
}

impl GeneralMap {
    /// `lipschitz` is the exact coefficient when known.
    pub fn new<F>(label: impl Into<String>, lipschitz: Option<f64>, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            lipschitz,
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for GeneralMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralMap")
            .field("label", &self.label)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum MapKind {
    Affine(AffineMap),
    General(GeneralMap),
}

/// One realization `Φ_t` acting on a [`StateSpace`].
#[derive(Debug, Clone)]
pub struct RandomMap {
    kind: MapKind,
    space: Arc<StateSpace>,
    time: Option<i64>,
}

impl RandomMap {
    pub fn affine(space: Arc<StateSpace>, map: AffineMap) -> Result<Self> {
        if map.dim() != space.dim() {
            return Err(SreError::Dimension {
                expected: space.dim(),
                got: map.dim(),
            });
        }
        Ok(Self {
            kind: MapKind::Affine(map),
            space,
            time: None,
        })
    }

    pub fn general(space: Arc<StateSpace>, map: GeneralMap) -> Self {
        Self {
            kind: MapKind::General(map),
            space,
            time: None,
        }
    }

    /// Tags the map with its time index; errors raised by it then carry `t`.
    pub fn at_time(mut self, t: i64) -> Self {
        self.time = Some(t);
        self
    }

    pub fn time(&self) -> Option<i64> {
        self.time
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn as_affine(&self) -> Option<&AffineMap> {
        match &self.kind {
            MapKind::Affine(a) => Some(a),
            MapKind::General(_) => None,
        }
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        &self.space
    }

    /// Exact Lipschitz coefficient, when it is known.
    pub fn exact_lipschitz(&self) -> Option<f64> {
        match &self.kind {
            MapKind::Affine(a) => Some(self.space.operator_norm(&a.slope)),
            MapKind::General(g) => g.lipschitz,
        }
    }

    /// Evaluates without membership or finiteness checks.
    pub fn apply_unchecked(&self, y: &[f64]) -> Vec<f64> {
        match &self.kind {
            MapKind::Affine(a) => a.apply(y),
            MapKind::General(g) => (g.eval)(y),
        }
    }

    /// `Φ_t(y)`, requiring `y` in the space and a finite member as output.
    pub fn evaluate(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.space.check_member(y).map_err(|e| self.tag(e))?;
        let out = self.apply_unchecked(y);
        self.check_output(out)
    }

    pub(crate) fn check_output(&self, out: Vec<f64>) -> Result<Vec<f64>> {
        if out.len() != self.space.dim() {
            return Err(SreError::Dimension {
                expected: self.space.dim(),
                got: out.len(),
            });
        }
        if let Some(i) = out.iter().position(|v| !v.is_finite()) {
            return Err(self.tag(SreError::Numeric {
                time: None,
                detail: format!("non-finite state coordinate {i} = {}", out[i]),
            }));
        }
        self.space.check_member(&out).map_err(|e| self.tag(e))?;
        Ok(out)
    }

    fn tag(&self, e: SreError) -> SreError {
        match self.time {
            Some(t) => e.at_time(t),
            None => e,
        }
    }
}

/// `Φ_t ∘ Φ_{t-1} ∘ ⋯ ∘ Φ_{t-r+1}`, factors stored most recent first.
#[derive(Debug, Clone)]
pub struct ComposedMap {
    factors: Vec<RandomMap>,
}

impl ComposedMap {
    pub fn factors(&self) -> &[RandomMap] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn space(&self) -> &Arc<StateSpace> {
        self.factors[0].space()
    }

    /// Applies the innermost factor first.
    pub fn evaluate(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut state = y.to_vec();
        for map in self.factors.iter().rev() {
            state = map.evaluate(&state)?;
        }
        Ok(state)
    }

    /// Collapsed affine form when every factor is affine.
    pub fn as_affine(&self) -> Option<AffineMap> {
        let mut iter = self.factors.iter().rev();
        let mut acc = iter.next()?.as_affine()?.clone();
        for map in iter {
            acc = map.as_affine()?.after(&acc);
        }
        Some(acc)
    }

    /// Exact coefficient of the composition when all factors are affine.
    pub fn exact_lipschitz(&self) -> Option<f64> {
        if self.factors.len() == 1 {
            return self.factors[0].exact_lipschitz();
        }
        self.as_affine()
            .map(|a| self.space().operator_norm(&a.slope))
    }

    /// Product of the factor coefficients, when all are known.
    pub fn lipschitz_upper(&self) -> Option<f64> {
        self.factors
            .iter()
            .map(RandomMap::exact_lipschitz)
            .try_fold(1.0, |acc, l| l.map(|l| acc * l))
    }
}

/// Builds `Φ^(r)` from maps ordered most recent first.
pub fn compose(maps: Vec<RandomMap>) -> Result<ComposedMap> {
    let Some(first) = maps.first() else {
        return Err(SreError::config("cannot compose an empty list of maps"));
    };
    let space = first.space().clone();
    if maps.iter().any(|m| **m.space() != *space) {
        return Err(SreError::config("composed maps must share one state space"));
    }
    Ok(ComposedMap { factors: maps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Arc<StateSpace> {
        Arc::new(StateSpace::real(1))
    }

    fn scalar(a: f64, b: f64) -> RandomMap {
        RandomMap::affine(line(), AffineMap::scalar(a, b)).unwrap()
    }

    #[test]
    fn identity_map() {
        assert_eq!(scalar(0.0, 1.0).evaluate(&[3.5]).unwrap(), vec![3.5]);
    }

    #[test]
    fn variance_filter_step() {
        let (omega, alpha, beta, u) = (0.1, 0.2, 0.7, 1.0_f64);
        let space = Arc::new(StateSpace::half_line());
        let map = RandomMap::affine(space, AffineMap::scalar(omega + alpha * u * u, beta)).unwrap();
        let out = map.evaluate(&[2.0]).unwrap();
        assert!((out[0] - 1.7).abs() < 1e-15);
    }

    #[test]
    fn composition_order() {
        let c = compose(vec![scalar(0.0, 0.5), scalar(0.0, 0.4)]).unwrap();
        assert!((c.evaluate(&[1.0]).unwrap()[0] - 0.2).abs() < 1e-15);
        let (a1, b1, a2, b2, y) = (1.0, 2.0, -3.0, 0.5, 4.0);
        let c = compose(vec![scalar(a1, b1), scalar(a2, b2)]).unwrap();
        assert_eq!(c.evaluate(&[y]).unwrap(), vec![a1 + b1 * (a2 + b2 * y)]);
        assert_eq!(c.order(), 2);
        let single = compose(vec![scalar(1.5, -0.3)]).unwrap();
        assert_eq!(single.evaluate(&[2.0]).unwrap(), scalar(1.5, -0.3).evaluate(&[2.0]).unwrap());
    }

    #[test]
    fn empty_composition_rejected() {
        assert!(matches!(compose(vec![]), Err(SreError::Config(_))));
    }

    #[test]
    fn mixed_spaces_rejected() {
        let other = RandomMap::affine(Arc::new(StateSpace::half_line()), AffineMap::scalar(0.0, 0.5)).unwrap();
        assert!(compose(vec![scalar(0.0, 0.5), other]).is_err());
    }

    #[test]
    fn domain_and_numeric_errors() {
        let space = Arc::new(StateSpace::half_line());
        let map = RandomMap::affine(space.clone(), AffineMap::scalar(0.1, 0.5))
            .unwrap()
            .at_time(9);
        let err = map.evaluate(&[-1.0]).unwrap_err();
        assert!(matches!(err, SreError::Domain { coordinate: 0, time: Some(9), .. }));
        let blow = RandomMap::affine(space, AffineMap::scalar(0.0, 1e300)).unwrap().at_time(3);
        let err = blow.evaluate(&[1e300]).unwrap_err();
        assert!(matches!(err, SreError::Numeric { time: Some(3), .. }));
    }

    #[test]
    fn closure_violation_is_reported() {
        let space = Arc::new(StateSpace::half_line());
        let map = RandomMap::affine(space, AffineMap::scalar(-5.0, 1.0)).unwrap();
        assert!(matches!(map.evaluate(&[1.0]), Err(SreError::Domain { .. })));
    }

    #[test]
    fn composed_lipschitz() {
        let c = compose(vec![scalar(1.0, 0.5), scalar(2.0, -0.4)]).unwrap();
        assert!((c.exact_lipschitz().unwrap() - 0.2).abs() < 1e-15);
        assert!((c.lipschitz_upper().unwrap() - 0.2).abs() < 1e-15);
    }
}
