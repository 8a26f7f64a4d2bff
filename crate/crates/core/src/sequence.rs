//! Seedable generators of map sequences `(Φ_t)`.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::lipschitz::MapDifference;
use crate::map::{compose, ComposedMap, RandomMap};
use crate::space::StateSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The stationary sequence `Φ_t`.
    Exact,
    /// A sequence `Φ̂_t` approximating the exact one.
    Perturbed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Exact => "exact",
            Variant::Perturbed => "perturbed",
        })
    }
}

/// Identity of a generated sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceInfo {
    pub model_id: String,
    pub seed: u64,
    pub replicate: u64,
    pub variant: Variant,
    /// Identifies the driving data (noise stream or observation path);
    /// exact and perturbed sequences can only be compared when it matches.
    pub source_id: u64,
    /// True when the driving noise is identically zero.
    pub degenerate_noise: bool,
}

/// A deterministic function `t ↦ Φ_t` of its seed.
///
/// Implementations must be pure in `t`: calling `map_at(t)` twice, or from
/// different threads, yields the same realization.
pub trait MapSequence: Send + Sync {
    fn info(&self) -> &SequenceInfo;

    fn space(&self) -> &Arc<StateSpace>;

    fn map_at(&self, t: i64) -> Result<RandomMap>;

    /// Inclusive range of `t` where `map_at` is defined; `None` if unbounded.
    fn time_range(&self) -> Option<(i64, i64)> {
        None
    }

    /// `Φ̂_t − Φ_t` against the exact counterpart, for perturbed sequences
    /// that can compute it without cancellation.
    fn deviation_at(&self, _t: i64) -> Option<Result<MapDifference>> {
        None
    }

    /// Whether the sequence is stationary (and assumed ergodic); only such
    /// sequences are admitted by the contraction estimators.
    fn is_stationary(&self) -> bool {
        self.info().variant == Variant::Exact
    }

    /// `Φ_t^(r) = Φ_t ∘ ⋯ ∘ Φ_{t−r+1}`.
    fn composed_at(&self, t: i64, r: usize) -> Result<ComposedMap> {
        let maps = (0..r as i64)
            .map(|k| self.map_at(t - k))
            .collect::<Result<Vec<_>>>()?;
        compose(maps)
    }
}

impl<S: MapSequence + ?Sized> MapSequence for Arc<S> {
    fn info(&self) -> &SequenceInfo {
        (**self).info()
    }
    fn space(&self) -> &Arc<StateSpace> {
        (**self).space()
    }
    fn map_at(&self, t: i64) -> Result<RandomMap> {
        (**self).map_at(t)
    }
    fn time_range(&self) -> Option<(i64, i64)> {
        (**self).time_range()
    }
    fn deviation_at(&self, t: i64) -> Option<Result<MapDifference>> {
        (**self).deviation_at(t)
    }
    fn is_stationary(&self) -> bool {
        (**self).is_stationary()
    }
}

/// `Φ̂_t − Φ_t`, preferring the perturbed sequence's own deviation.
pub fn difference_at(
    exact: &dyn MapSequence,
    perturbed: &dyn MapSequence,
    t: i64,
) -> Result<MapDifference> {
    let paired = exact.info().variant == Variant::Exact
        && perturbed.info().variant == Variant::Perturbed;
    if paired {
        if let Some(dev) = perturbed.deviation_at(t) {
            return dev;
        }
    }
    MapDifference::between(&perturbed.map_at(t)?, &exact.map_at(t)?)
}
