//! Stochastic recurrence equations `Y_t = Φ_t(Y_{t−1})` driven by random
//! Lipschitz maps on box-constrained state spaces.
//!
//! The crate provides the map objects (`Φ_t`, compositions `Φ_t^(r)`,
//! Lipschitz coefficients `Λ`), ready-made models (AR(1), GARCH(1,1) and a
//! joint mean/variance filter with a perturbed variant), Monte Carlo checks
//! of the contraction and log-moment conditions, and trajectory diagnostics
//! for exponentially fast almost sure (e.a.s.) convergence.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod convergence;
pub mod error;
pub mod lipschitz;
pub mod lyapunov;
pub mod map;
pub mod models;
pub mod rng;
pub mod sampling;
pub mod sequence;
pub mod space;
pub mod stats;
mod trajectory;

pub use error::{Result, SreError};
pub use lipschitz::{
    composed_lipschitz, lipschitz_coefficient, lipschitz_difference, LipschitzEstimate, MapDifference, ProbePlan,
    WitnessKind,
};
pub use map::{compose, AffineMap, ComposedMap, GeneralMap, RandomMap};
pub use rng::StreamSeed;
pub use sequence::{MapSequence, SequenceInfo, Variant};
pub use space::{NormKind, StateSpace};

/// Toolkit version recorded in output files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
