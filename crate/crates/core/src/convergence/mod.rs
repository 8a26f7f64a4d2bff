//! Trajectory-level checks: forward iteration, backward approximants,
//! coupling and perturbed-filter gaps, and e.a.s. rate fits.

mod fit;
mod gaps;
mod iterate;
pub mod lemmas;

pub use crate::trajectory::{Trajectory, TrajectoryMeta};
pub use fit::{
    fit_rate, fit_rate_with, ols, theil_sen, FitOptions, LineFit, RateFit, RateVerdict, SlopeEstimator,
    DEFAULT_CI_LEVEL, MIN_FIT_POINTS, R_SQUARED_GATE,
};
pub use gaps::{check_paired, coupling_gap, perturbed_gap, GapSeries, GAP_FLOOR};
pub use iterate::{approximant_gap, backward_approximant, iterate_forward, iterate_forward_from};
pub use lemmas::{lemma1_probe, lemma2_check, lemma3_probe, Lemma2Report, Lemma3Outcome};
