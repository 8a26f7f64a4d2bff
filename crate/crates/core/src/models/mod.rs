//! Ready-made map sequences: AR(1), GARCH(1,1) and the joint mean/variance
//! filter with its perturbed variant.

pub mod ar;
pub mod garch;
pub mod joint;
pub mod noise;
pub mod schedule;

pub use ar::{make_ar, ArParams, ArSequence};
pub use garch::{make_garch, GarchParams, GarchSequence, GarchView};
pub use joint::{make_joint_filter, JointFilter, JointFilterParams, JointPath, VarianceFilter};
pub use noise::{NoiseDistribution, NoiseSpec};
pub use schedule::{make_affine_schedule, AffineSchedule};

use crate::convergence::iterate_forward;
use crate::error::{Result, SreError};
use crate::sequence::MapSequence;
use crate::trajectory::Trajectory;

/// Runs `y_t = Φ_t(y_{t−1})` for `t = 1..=horizon` from `y0`.
pub fn simulate_observations(seq: &dyn MapSequence, y0: &[f64], horizon: usize) -> Result<Trajectory> {
    if horizon == 0 {
        return Err(SreError::config("horizon must be >= 1"));
    }
    iterate_forward(seq, y0, horizon)
}
