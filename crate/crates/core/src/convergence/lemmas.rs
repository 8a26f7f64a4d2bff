//! Numerical probes of the auxiliary lemmas behind the convergence results.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Result, SreError};
use crate::rng::{Domain, StreamSeed};
use crate::sampling::{draw, ScalarSampler};
use crate::stats::log_plus;

use super::fit::{fit_rate, RateFit};
use super::gaps::GapSeries;

/// Threshold the scaled product must stay below.
pub const LEMMA3_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Outcome {
    pub gamma: f64,
    /// Final value of `log(γ^n·∏ X_t)`.
    pub final_log: f64,
    pub below: bool,
}

/// For each `γ`, whether `γ^k·∏_{t=0}^{k} X_t` is below `1e-6` for every
/// `k` in the second half `[n/2, n]` of the horizon.
///
/// The product is tracked in log space, so underflow cannot fake a pass;
/// a zero sample sends it to zero for good.
pub fn lemma3_probe<S: ScalarSampler + ?Sized>(
    x_sampler: &S,
    n: usize,
    gamma_list: &[f64],
    seed: u64,
) -> Result<Vec<Lemma3Outcome>> {
    if let Some(g) = gamma_list.iter().find(|g| !(**g > 1.0)) {
        return Err(SreError::config(format!("lemma 3 probe needs gamma > 1, got {g}")));
    }
    let xs = draw(x_sampler, n + 1, seed, Domain::Lemma)?;
    if let Some((i, &x)) = xs.iter().enumerate().find(|(_, x)| !(**x >= 0.0)) {
        return Err(SreError::NegativeSample { index: i as u64, value: x });
    }
    let threshold = LEMMA3_THRESHOLD.ln();
    Ok(gamma_list
        .iter()
        .map(|&gamma| {
            let lg = gamma.ln();
            let mut acc = 0.0_f64;
            let mut below = true;
            for (k, &x) in xs.iter().enumerate() {
                acc += lg + x.ln();
                if k >= n / 2 && !(acc < threshold) {
                    below = false;
                }
            }
            Lemma3Outcome {
                gamma,
                final_log: acc,
                below,
            }
        })
        .collect())
}

/// Fits the decay of `X_t·Y_t` with `X_t = c·0.5^t` and stationary `Y_t`
/// drawn from `y_sampler` (which must have a finite log⁺ moment).
pub fn lemma1_probe<S: ScalarSampler + ?Sized>(c: f64, n: usize, y_sampler: &S, seed: u64) -> Result<RateFit> {
    let ys = draw(y_sampler, n + 1, seed, Domain::Lemma)?;
    let gaps = ys
        .iter()
        .enumerate()
        .map(|(t, &y)| {
            if y < 0.0 {
                Err(SreError::NegativeSample { index: t as u64, value: y })
            } else {
                Ok(c * 0.5_f64.powi(t as i32) * y)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_rate(&GapSeries::new(0, gaps)?, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma2Report {
    pub pairs: usize,
    pub sum_violations: usize,
    pub product_violations: usize,
}

/// Pointwise `log⁺(x+y) ≤ 2 log 2 + log⁺x + log⁺y` and
/// `log⁺(xy) ≤ log⁺x + log⁺y` on random nonnegative pairs spread over
/// many orders of magnitude. Comparisons allow a few ulps of rounding.
pub fn lemma2_check(pairs: usize, seed: u64) -> Lemma2Report {
    let seed = StreamSeed::new(seed);
    let slack = |rhs: f64| 4.0 * f64::EPSILON * (1.0 + rhs.abs());
    let (sum_violations, product_violations) = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.stream(Domain::Lemma, i as i64);
            let draw_one = |rng: &mut rand_chacha::ChaCha8Rng| {
                if rng.random::<f64>() < 0.05 {
                    0.0
                } else {
                    (rng.random::<f64>() * 80.0 - 40.0).exp()
                }
            };
            let x = draw_one(&mut rng);
            let y = draw_one(&mut rng);
            let (lx, ly) = (log_plus(x), log_plus(y));
            let rhs_sum = 2.0 * 2f64.ln() + lx + ly;
            let rhs_prod = lx + ly;
            (
                usize::from(log_plus(x + y) > rhs_sum + slack(rhs_sum)),
                usize::from(log_plus(x * y) > rhs_prod + slack(rhs_prod)),
            )
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Lemma2Report {
        pairs,
        sum_violations,
        product_violations,
    }
}
