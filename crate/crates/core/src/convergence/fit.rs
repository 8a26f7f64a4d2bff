//! Log-linear decay fits `log g_t ≈ intercept + slope·t`.
//!
//! A gap series converging e.a.s. satisfies `γ^t·g_t → 0` for some `γ > 1`;
//! a negative fitted slope gives the estimate `γ̂ = exp(−slope)`. Verdicts
//! are statistical evidence and always come with the CI and `r²`.

use std::fmt;

use crate::stats::{compensated_sum, format_number, student_quantile};

use super::gaps::GapSeries;

pub const MIN_FIT_POINTS: usize = 20;
pub const R_SQUARED_GATE: f64 = 0.8;
pub const DEFAULT_CI_LEVEL: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateVerdict {
    Eas,
    NotEas,
    IdenticallyZero,
    Inconclusive,
}

impl RateVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RateVerdict::Eas => "eas",
            RateVerdict::NotEas => "not_eas",
            RateVerdict::IdenticallyZero => "identically_zero",
            RateVerdict::Inconclusive => "inconclusive",
        }
    }

    pub fn passes(self) -> bool {
        matches!(self, RateVerdict::Eas | RateVerdict::IdenticallyZero)
    }
}

impl fmt::Display for RateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlopeEstimator {
    #[default]
    Ols,
    /// Median of pairwise slopes; the standard error still comes from the
    /// residuals around the robust line.
    TheilSen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Leading points dropped; `None` means 10% of the series.
    pub burn_in: Option<usize>,
    pub ci_level: f64,
    pub estimator: SlopeEstimator,
    /// Keep only `t` that are multiples of this lattice step.
    pub lattice: Option<usize>,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            burn_in: None,
            ci_level: DEFAULT_CI_LEVEL,
            estimator: SlopeEstimator::Ols,
            lattice: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub slope_se: f64,
    pub gamma_hat: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub ci_level: f64,
    pub n_used: usize,
    pub burn_in: usize,
    pub verdict: RateVerdict,
}

impl RateFit {
    pub const CSV_HEADER: &'static str = "slope,slope_se,gamma_hat,intercept,r_squared,n_used,burn_in,verdict";

    pub fn csv_fields(&self) -> String {
        let n = format_number;
        format!(
            "{},{},{},{},{},{},{},{}",
            n(self.slope),
            n(self.slope_se),
            n(self.gamma_hat),
            n(self.intercept),
            n(self.r_squared),
            self.n_used,
            self.burn_in,
            self.verdict
        )
    }

    /// Two-sided Student t interval for the slope.
    pub fn slope_ci(&self) -> (f64, f64) {
        let q = student_quantile(self.ci_level, (self.n_used.max(3) - 2) as f64);
        (self.slope - q * self.slope_se, self.slope + q * self.slope_se)
    }
}

/// Straight-line fit of `(x, y)` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_se: f64,
    pub r_squared: f64,
}

/// Ordinary least squares with normal-theory slope standard error.
pub fn ols(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = compensated_sum(x.iter().copied()) / n;
    let my = compensated_sum(y.iter().copied()) / n;
    let sxx = compensated_sum(x.iter().map(|v| (v - mx) * (v - mx)));
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    finish_line(x, y, slope, intercept, my, sxx)
}

fn finish_line(x: &[f64], y: &[f64], slope: f64, intercept: f64, my: f64, sxx: f64) -> LineFit {
    let sse = compensated_sum(x.iter().zip(y).map(|(a, b)| {
        let r = b - (intercept + slope * a);
        r * r
    }));
    let sst = compensated_sum(y.iter().map(|b| (b - my) * (b - my)));
    let dof = x.len().saturating_sub(2).max(1) as f64;
    let slope_se = (sse / dof / sxx).sqrt();
    let r_squared = if sst > 0.0 {
        (1.0 - sse / sst).max(0.0)
    } else if sse == 0.0 {
        1.0
    } else {
        0.0
    };
    LineFit {
        slope,
        intercept,
        slope_se,
        r_squared,
    }
}

const THEIL_SEN_MAX_POINTS: usize = 2000;

/// Theil–Sen line; long series are thinned to at most 2000 evenly spaced points.
pub fn theil_sen(x: &[f64], y: &[f64]) -> LineFit {
    let stride = x.len().div_ceil(THEIL_SEN_MAX_POINTS).max(1);
    let xs: Vec<f64> = x.iter().step_by(stride).copied().collect();
    let ys: Vec<f64> = y.iter().step_by(stride).copied().collect();
    let mut slopes = Vec::with_capacity(xs.len() * xs.len() / 2);
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if xs[j] != xs[i] {
                slopes.push((ys[j] - ys[i]) / (xs[j] - xs[i]));
            }
        }
    }
    let slope = median(&mut slopes);
    let mut offsets: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - slope * a).collect();
    let intercept = median(&mut offsets);
    let n = x.len() as f64;
    let mx = compensated_sum(x.iter().copied()) / n;
    let my = compensated_sum(y.iter().copied()) / n;
    let sxx = compensated_sum(x.iter().map(|v| (v - mx) * (v - mx)));
    finish_line(x, y, slope, intercept, my, sxx)
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Fits `log g_t` on `t` over non-floored points after the burn-in.
pub fn fit_rate(gaps: &GapSeries, burn_in: Option<usize>) -> RateFit {
    fit_rate_with(gaps, &FitOptions { burn_in, ..FitOptions::default() })
}

pub fn fit_rate_with(gaps: &GapSeries, opts: &FitOptions) -> RateFit {
    let burn_in = opts.burn_in.unwrap_or(gaps.len() / 10).min(gaps.len());
    let mut all_floored = true;
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (k, t) in gaps.times().enumerate().skip(burn_in) {
        if let Some(step) = opts.lattice {
            if step > 1 && t.rem_euclid(step as i64) != 0 {
                continue;
            }
        }
        if gaps.floored[k] {
            continue;
        }
        all_floored = false;
        x.push(t as f64);
        y.push(gaps.gaps[k].ln());
    }
    let blank = |verdict| RateFit {
        slope: f64::NAN,
        slope_se: f64::NAN,
        gamma_hat: f64::NAN,
        intercept: f64::NAN,
        r_squared: f64::NAN,
        ci_level: opts.ci_level,
        n_used: x.len(),
        burn_in,
        verdict,
    };
    if all_floored {
        return blank(RateVerdict::IdenticallyZero);
    }
    if x.len() < MIN_FIT_POINTS {
        return blank(RateVerdict::Inconclusive);
    }
    let line = match opts.estimator {
        SlopeEstimator::Ols => ols(&x, &y),
        SlopeEstimator::TheilSen => theil_sen(&x, &y),
    };
    let mut fit = RateFit {
        slope: line.slope,
        slope_se: line.slope_se,
        gamma_hat: (-line.slope).exp(),
        intercept: line.intercept,
        r_squared: line.r_squared,
        ci_level: opts.ci_level,
        n_used: x.len(),
        burn_in,
        verdict: RateVerdict::Inconclusive,
    };
    let (lo, hi) = fit.slope_ci();
    fit.verdict = if hi < 0.0 && fit.r_squared >= R_SQUARED_GATE {
        RateVerdict::Eas
    } else if lo >= 0.0 {
        RateVerdict::NotEas
    } else {
        RateVerdict::Inconclusive
    };
    fit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Domain, StreamSeed};
    use proptest::prelude::*;
    use rand::Rng;

    fn series(f: impl Fn(i64) -> f64, n: i64) -> GapSeries {
        GapSeries::new(0, (0..n).map(f).collect()).unwrap()
    }

    #[test]
    fn exact_geometric_line() {
        let fit = fit_rate(&series(|t| 0.5_f64.powi(t as i32), 200), None);
        assert!((fit.slope - 0.5_f64.ln()).abs() < 1e-12);
        assert!((fit.gamma_hat - 2.0).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.verdict, RateVerdict::Eas);
        assert_eq!(fit.burn_in, 20);
        assert_eq!(fit.n_used, 180);
    }

    #[test]
    fn constant_gap_is_not_eas() {
        let fit = fit_rate(&series(|_| 1.0, 100), None);
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.verdict, RateVerdict::NotEas);
    }

    #[test]
    fn noisy_geometric_decay() {
        let mut rng = StreamSeed::new(31).stream(Domain::User, 0);
        let noise: Vec<f64> = (0..300).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let fit = fit_rate(&series(|t| 0.8_f64.powi(t as i32) * (1.0 + 0.1 * noise[t as usize]), 300), None);
        assert!((fit.slope - 0.8_f64.ln()).abs() < 0.05);
        assert_eq!(fit.verdict, RateVerdict::Eas);
        let robust = fit_rate_with(
            &series(|t| 0.8_f64.powi(t as i32) * (1.0 + 0.1 * noise[t as usize]), 300),
            &FitOptions { estimator: SlopeEstimator::TheilSen, ..Default::default() },
        );
        assert!((robust.slope - 0.8_f64.ln()).abs() < 0.05);
    }

    #[test]
    fn zero_and_short_series() {
        let zero = fit_rate(&series(|_| 0.0, 50), None);
        assert_eq!(zero.verdict, RateVerdict::IdenticallyZero);
        let short = fit_rate(&series(|t| 0.5_f64.powi(t as i32), 15), Some(0));
        assert_eq!(short.verdict, RateVerdict::Inconclusive);
        let underflow = fit_rate(&series(|t| if t < 10 { 1.0 } else { 0.0 }, 100), Some(0));
        assert_eq!(underflow.verdict, RateVerdict::Inconclusive);
        assert_eq!(underflow.n_used, 10);
    }

    #[test]
    fn growth_is_not_eas() {
        let fit = fit_rate(&series(|t| 1.5_f64.powi(t as i32), 100), None);
        assert_eq!(fit.verdict, RateVerdict::NotEas);
    }

    #[test]
    fn lattice_fit() {
        let opts = FitOptions { lattice: Some(3), burn_in: Some(0), ..Default::default() };
        let fit = fit_rate_with(&series(|t| 0.9_f64.powi(t as i32), 90), &opts);
        assert_eq!(fit.n_used, 30);
        assert!((fit.slope - 0.9_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn negative_gap_rejected() {
        assert!(GapSeries::new(0, vec![1.0, -1.0]).is_err());
        assert!(GapSeries::new(0, vec![1.0, f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn scaling_changes_intercept_only(c in 1e-3f64..1e3, rate in 0.1f64..0.95, seed in any::<u64>()) {
            let mut rng = StreamSeed::new(seed).stream(Domain::User, 0);
            let noise: Vec<f64> = (0..120).map(|_| 0.5 + rng.random::<f64>()).collect();
            let base = series(|t| rate.powi(t as i32) * noise[t as usize], 120);
            let scaled = GapSeries::new(0, base.gaps.iter().map(|g| g * c).collect()).unwrap();
            let (a, b) = (fit_rate(&base, None), fit_rate(&scaled, None));
            prop_assert!((a.slope - b.slope).abs() <= 1e-10);
            prop_assert!((a.gamma_hat - b.gamma_hat).abs() <= 1e-10 * a.gamma_hat);
            prop_assert_eq!(a.verdict, b.verdict);
            prop_assert!((b.intercept - a.intercept - c.ln()).abs() <= 1e-9);
        }
    }
}
