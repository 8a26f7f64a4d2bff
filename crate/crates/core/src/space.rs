//! Finite-dimensional state spaces with componentwise box constraints.

use nalgebra::DMatrix;

use crate::error::{Result, SreError};

/// Norm used for distances and induced operator norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormKind {
    #[default]
    Sup,
    Euclidean,
}

/// A closed box `[lower_i, upper_i]` in `R^dim`; bounds may be infinite.
///
/// Closed boxes are complete subsets of `R^dim`, which covers `R`,
/// `[0, inf)` and products such as `R x [0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    norm: NormKind,
}

impl StateSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, norm: NormKind) -> Result<Self> {
        if lower.is_empty() {
            return Err(SreError::config("state space must have dimension >= 1"));
        }
        if lower.len() != upper.len() {
            return Err(SreError::Dimension {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
            {
                return Err(SreError::config(format!(
                    "coordinate {i}: need lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper, norm })
    }

    /// `R^dim` with the sup norm.
    pub fn real(dim: usize) -> Self {
        Self::new(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim], NormKind::Sup)
            .expect("dim >= 1")
    }

    /// `[0, inf)`.
    pub fn half_line() -> Self {
        Self::new(vec![0.0], vec![f64::INFINITY], NormKind::Sup).expect("valid bounds")
    }

    pub fn with_norm(mut self, norm: NormKind) -> Self {
        self.norm = norm;
        self
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        y.len() == self.dim()
            && y
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Like [`contains`](Self::contains) but names the first violated coordinate.
    pub fn check_member(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim() {
            return Err(SreError::Dimension {
                expected: self.dim(),
                got: y.len(),
            });
        }
        for (i, &v) in y.iter().enumerate() {
            let (lo, hi) = (self.lower[i], self.upper[i]);
            if !(lo <= v && v <= hi) {
                return Err(SreError::Domain {
                    coordinate: i,
                    value: v,
                    lower: lo,
                    upper: hi,
                    time: None,
                });
            }
        }
        Ok(())
    }

    /// Nearest point of the box (componentwise clamp).
    pub fn clip(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| v.clamp(lo, hi))
            .collect()
    }

    /// Zero vector clipped into the box.
    pub fn default_anchor(&self) -> Vec<f64> {
        self.clip(&vec![0.0; self.dim()])
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        vector_norm(self.norm, v)
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.norm(&diff)
    }

    /// Operator norm of `m` induced by this space's norm.
    pub fn operator_norm(&self, m: &DMatrix<f64>) -> f64 {
        operator_norm(self.norm, m)
    }
}

pub fn vector_norm(kind: NormKind, v: &[f64]) -> f64 {
    match kind {
        NormKind::Sup => v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())),
        NormKind::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

/// Induced norm: max absolute row sum for sup, largest singular value for Euclidean.
pub fn operator_norm(kind: NormKind, m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].abs();
    }
    match kind {
        NormKind::Sup => m
            .row_iter()
            .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Euclidean => m
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn membership_respects_bounds() {
        let s = StateSpace::new(vec![f64::NEG_INFINITY, 0.0], vec![f64::INFINITY, f64::INFINITY], NormKind::Sup)
            .unwrap();
        assert!(s.contains(&[-3.0, 0.0]));
        assert!(!s.contains(&[-3.0, -1e-300]));
        let err = s.check_member(&[1.0, -2.0]).unwrap_err();
        assert!(matches!(err, SreError::Domain { coordinate: 1, .. }));
        assert!(matches!(s.check_member(&[1.0]), Err(SreError::Dimension { .. })));
        assert!(!s.contains(&[f64::NAN, 1.0]));
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(StateSpace::new(vec![1.0], vec![1.0], NormKind::Sup).is_err());
        assert!(StateSpace::new(vec![], vec![], NormKind::Sup).is_err());
    }

    #[test]
    fn operator_norms() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, -0.25, 0.0, 0.7]);
        assert_eq!(operator_norm(NormKind::Sup, &m), 0.75);
        let d = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, -4.0]);
        assert!((operator_norm(NormKind::Euclidean, &d) - 4.0).abs() < 1e-12);
        assert_eq!(operator_norm(NormKind::Sup, &DMatrix::from_element(1, 1, -0.8)), 0.8);
    }

    #[test]
    fn clip_gives_anchor() {
        let s = StateSpace::new(vec![1.0, -5.0], vec![2.0, 5.0], NormKind::Sup).unwrap();
        assert_eq!(s.default_anchor(), vec![1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn norm_is_a_metric(
            a in prop::collection::vec(-1e3f64..1e3, 3),
            b in prop::collection::vec(-1e3f64..1e3, 3),
            c in prop::collection::vec(-1e3f64..1e3, 3),
            euclid in any::<bool>(),
        ) {
            let kind = if euclid { NormKind::Euclidean } else { NormKind::Sup };
            let s = StateSpace::real(3).with_norm(kind);
            prop_assert_eq!(s.distance(&a, &a), 0.0);
            if a != b {
                prop_assert!(s.distance(&a, &b) > 0.0);
            }
            let lhs = s.distance(&a, &c);
            let rhs = s.distance(&a, &b) + s.distance(&b, &c);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}
