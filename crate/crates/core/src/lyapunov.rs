//! Monte Carlo checks of the contraction and log-moment conditions.
//!
//! The existence/uniqueness hypotheses are
//! (i) `E[log⁺‖Φ_0(y) − y‖] < ∞`,
//! (ii) `E[log⁺ Λ(Φ_0)] < ∞` and `E[log Λ(Φ_0^(r))] < 0` for some `r`;
//! the perturbed-filter result adds `E[log⁺‖Y_0‖] < ∞` and e.a.s. decay of
//! `‖Φ̂_t(y) − Φ_t(y)‖` and `Λ(Φ̂_t − Φ_t)`. Expectations are estimated by
//! sample means with confidence intervals, so every verdict is evidence,
//! not proof. Finiteness of a log⁺ moment cannot be certified numerically.

use std::fmt;

use rayon::prelude::*;

use crate::convergence::{fit_rate_with, FitOptions, GapSeries, RateFit, RateVerdict};
use crate::error::{Result, SreError};
use crate::lipschitz::{composed_lipschitz, difference_coefficient, lipschitz_coefficient, ProbePlan, WitnessKind};
use crate::map::ComposedMap;
use crate::rng::Domain;
use crate::sampling::{draw, ScalarSampler};
use crate::sequence::{difference_at, MapSequence};
use crate::stats::{format_number, log_plus, mean_and_se, normal_quantile};

pub const MIN_MOMENT_SAMPLES: usize = 100;
pub const MIN_BLOCKS: usize = 30;
pub const DEFAULT_CI_LEVEL: f64 = 0.99;
/// Thresholds on the log⁺ scale for the tail diagnostic.
pub const TAIL_THRESHOLDS: [f64; 3] = [10.0, 20.0, 40.0];

pub const MOMENT_CAVEAT: &str =
    "finiteness of a log+ moment cannot be certified from samples; a finite mean with empty far tails is a diagnostic only";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConditionId {
    /// `E log⁺‖Φ_0(y) − y‖`.
    P1i,
    /// `E log⁺ Λ(Φ_0)`.
    P1iiLogPlus,
    /// `E log⁺‖Y_0‖`.
    P3i,
}

impl ConditionId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::P1i => "p1_i",
            ConditionId::P1iiLogPlus => "p1_ii_logplus",
            ConditionId::P3i => "p3_i",
        }
    }
}

/// Overall reading of a check, used for exit codes and summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub condition: ConditionId,
    pub n_samples: usize,
    pub empirical_mean: f64,
    pub std_error: f64,
    /// Fraction of samples whose log⁺ exceeds each of [`TAIL_THRESHOLDS`].
    pub tail_fractions: [f64; 3],
}

impl MomentReport {
    /// `finite` when the mean is finite and no sample reaches the last
    /// tail threshold, `suspect` otherwise.
    pub fn diagnostic(&self) -> &'static str {
        if self.outcome() == Outcome::Pass {
            "finite"
        } else {
            "suspect"
        }
    }

    pub fn outcome(&self) -> Outcome {
        if self.empirical_mean.is_finite() && self.tail_fractions[2] == 0.0 {
            Outcome::Pass
        } else {
            Outcome::Inconclusive
        }
    }
}

/// Sample mean and standard error of `log⁺ X`.
pub fn check_logplus_moment<S: ScalarSampler + ?Sized>(
    condition: ConditionId,
    sampler: &S,
    n: usize,
    seed: u64,
) -> Result<MomentReport> {
    if n < MIN_MOMENT_SAMPLES {
        return Err(SreError::config(format!(
            "moment check needs n >= {MIN_MOMENT_SAMPLES}, got {n}"
        )));
    }
    let samples = draw(sampler, n, seed, Domain::Moment)?;
    let mut logs = Vec::with_capacity(n);
    for (i, &x) in samples.iter().enumerate() {
        if !(x >= 0.0) {
            return Err(SreError::NegativeSample { index: i as u64, value: x });
        }
        logs.push(log_plus(x));
    }
    let (mean, se) = mean_and_se(&logs);
    let tail = TAIL_THRESHOLDS.map(|th| logs.iter().filter(|&&l| l > th).count() as f64 / n as f64);
    Ok(MomentReport {
        condition,
        n_samples: n,
        empirical_mean: mean,
        std_error: se,
        tail_fractions: tail,
    })
}

/// `Ê[log Λ(Φ^(r))]`; `−∞` is kept distinct from finite values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogEstimate {
    Finite(f64),
    NegInfinity,
}

impl LogEstimate {
    pub fn value(self) -> f64 {
        match self {
            LogEstimate::Finite(v) => v,
            LogEstimate::NegInfinity => f64::NEG_INFINITY,
        }
    }
}

impl fmt::Display for LogEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogEstimate::Finite(v) => f.write_str(&format_number(*v)),
            LogEstimate::NegInfinity => f.write_str("-inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContractionVerdict {
    Contractive,
    NotContractive,
    Inconclusive,
}

impl ContractionVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            ContractionVerdict::Contractive => "contractive",
            ContractionVerdict::NotContractive => "not_contractive",
            ContractionVerdict::Inconclusive => "inconclusive",
        }
    }

    pub fn outcome(self) -> Outcome {
        match self {
            ContractionVerdict::Contractive => Outcome::Pass,
            ContractionVerdict::NotContractive => Outcome::Fail,
            ContractionVerdict::Inconclusive => Outcome::Inconclusive,
        }
    }
}

impl fmt::Display for ContractionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionReport {
    pub r: usize,
    pub n_blocks: usize,
    pub estimate: LogEstimate,
    pub std_error: f64,
    pub ci_level: f64,
    pub verdict: ContractionVerdict,
    /// Weakest witness over the blocks.
    pub witness: WitnessKind,
}

impl ContractionReport {
    /// Contractive iff `estimate + z·se < 0`, not contractive iff
    /// `estimate − z·se > 0`, else inconclusive. A verdict the witness cannot
    /// support (contractive from lower bounds, not contractive from upper
    /// bounds) is downgraded to inconclusive.
    pub fn classify(estimate: LogEstimate, se: f64, ci_level: f64, witness: WitnessKind) -> ContractionVerdict {
        let raw = match estimate {
            LogEstimate::NegInfinity => ContractionVerdict::Contractive,
            LogEstimate::Finite(m) => {
                let z = normal_quantile(ci_level);
                if m + z * se < 0.0 {
                    ContractionVerdict::Contractive
                } else if m - z * se > 0.0 {
                    ContractionVerdict::NotContractive
                } else {
                    ContractionVerdict::Inconclusive
                }
            }
        };
        match (raw, witness) {
            (ContractionVerdict::Contractive, WitnessKind::SampledLowerBound)
            | (ContractionVerdict::NotContractive, WitnessKind::UpperBound) => ContractionVerdict::Inconclusive,
            (v, _) => v,
        }
    }

    /// Note explaining a witness-driven downgrade, if any.
    pub fn note(&self) -> Option<&'static str> {
        match (self.verdict, self.witness) {
            (ContractionVerdict::Inconclusive, WitnessKind::SampledLowerBound) => Some("lower-bound witness"),
            (ContractionVerdict::Inconclusive, WitnessKind::UpperBound) => Some("upper-bound witness"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionSettings {
    pub n_blocks: usize,
    pub ci_level: f64,
    /// Required for sequences of non-affine maps.
    pub probe: Option<ProbePlan>,
    /// Seeds the probe pairs.
    pub seed: u64,
    /// Use fewer blocks when a bounded sequence cannot supply `n_blocks`
    /// windows of length `r` (never fewer than [`MIN_BLOCKS`]).
    pub cap_blocks: bool,
}

impl Default for ContractionSettings {
    fn default() -> Self {
        Self {
            n_blocks: 1000,
            ci_level: DEFAULT_CI_LEVEL,
            probe: None,
            seed: 0,
            cap_blocks: false,
        }
    }
}

fn check_admissible(seq: &dyn MapSequence) -> Result<()> {
    if !seq.is_stationary() {
        return Err(SreError::config(format!(
            "{} {} sequence is not stationary; contraction estimates need the exact sequence",
            seq.info().model_id,
            seq.info().variant
        )));
    }
    if seq.info().degenerate_noise {
        return Err(SreError::config("statistical estimators refuse degenerate (zero) noise"));
    }
    Ok(())
}

/// First usable `t` and how many maps are available from there.
fn time_window(seq: &dyn MapSequence) -> (i64, Option<u64>) {
    match seq.time_range() {
        Some((lo, hi)) => (lo, Some((hi - lo + 1).max(0) as u64)),
        None => (1, None),
    }
}

fn log_lipschitz(map: &ComposedMap, probe: Option<&ProbePlan>) -> Result<(f64, WitnessKind)> {
    if map.space().dim() == 1 {
        if let Some(slopes) = map
            .factors()
            .iter()
            .map(|f| f.as_affine().map(|a| a.slope[(0, 0)]))
            .collect::<Option<Vec<_>>>()
        {
            let log = slopes.iter().map(|b| b.abs().ln()).sum::<f64>();
            return Ok((log, WitnessKind::Exact));
        }
    }
    let est = composed_lipschitz(map, probe)?;
    Ok((est.value.ln(), est.witness))
}

fn weakest(a: WitnessKind, b: WitnessKind) -> WitnessKind {
    use WitnessKind::*;
    match (a, b) {
        (SampledLowerBound, _) | (_, SampledLowerBound) => SampledLowerBound,
        (UpperBound, _) | (_, UpperBound) => UpperBound,
        _ => Exact,
    }
}

/// Mean ± SE of `log Λ(Φ^(r))` over `n_blocks` disjoint windows of length `r`.
pub fn estimate_contraction(
    seq: &dyn MapSequence,
    r: usize,
    n_blocks: usize,
    probe: Option<&ProbePlan>,
    seed: u64,
) -> Result<ContractionReport> {
    let settings = ContractionSettings {
        n_blocks,
        probe: probe.cloned(),
        seed,
        ..ContractionSettings::default()
    };
    estimate_contraction_with(seq, r, &settings)
}

pub fn estimate_contraction_with(seq: &dyn MapSequence, r: usize, settings: &ContractionSettings) -> Result<ContractionReport> {
    if r == 0 {
        return Err(SreError::config("contraction order r must be >= 1"));
    }
    if settings.n_blocks < MIN_BLOCKS {
        return Err(SreError::config(format!(
            "contraction estimate needs n_blocks >= {MIN_BLOCKS}, got {}",
            settings.n_blocks
        )));
    }
    check_admissible(seq)?;
    let (start, available) = time_window(seq);
    let mut n_blocks = settings.n_blocks;
    if let Some(avail) = available {
        let fits = (avail / r as u64) as usize;
        if settings.cap_blocks && fits < n_blocks {
            n_blocks = fits;
        }
        if n_blocks > fits || n_blocks < MIN_BLOCKS {
            return Err(SreError::config(format!(
                "{n_blocks} blocks of length {r} need {} maps, sequence provides {avail}",
                n_blocks.max(MIN_BLOCKS) * r
            )));
        }
    }
    let probe = settings.probe.as_ref().map(|p| ProbePlan {
        seed: p.seed ^ settings.seed,
        ..p.clone()
    });
    let blocks = (0..n_blocks)
        .into_par_iter()
        .map(|k| {
            let t = start + ((k + 1) * r) as i64 - 1;
            let map = seq.composed_at(t, r)?;
            log_lipschitz(&map, probe.as_ref())
        })
        .collect::<Result<Vec<_>>>()?;
    let witness = blocks.iter().fold(WitnessKind::Exact, |w, b| weakest(w, b.1));
    let logs: Vec<f64> = blocks.iter().map(|b| b.0).collect();
    let (estimate, std_error) = if logs.contains(&f64::NEG_INFINITY) {
        (LogEstimate::NegInfinity, 0.0)
    } else {
        let (m, se) = mean_and_se(&logs);
        if !m.is_finite() {
            return Err(SreError::Numeric {
                time: None,
                detail: "non-finite log Lipschitz coefficient".into(),
            });
        }
        (LogEstimate::Finite(m), se)
    };
    Ok(ContractionReport {
        r,
        n_blocks,
        estimate,
        std_error,
        ci_level: settings.ci_level,
        verdict: ContractionReport::classify(estimate, std_error, settings.ci_level, witness),
        witness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContractionScan {
    /// Smallest contractive order, if any up to `r_max`.
    pub order: Option<usize>,
    pub reports: Vec<ContractionReport>,
}

impl ContractionScan {
    /// Contractive if some order is; otherwise inconclusive if any scanned
    /// order was, else not contractive.
    pub fn verdict(&self) -> ContractionVerdict {
        if self.order.is_some() {
            ContractionVerdict::Contractive
        } else if self.reports.iter().any(|r| r.verdict == ContractionVerdict::Inconclusive) {
            ContractionVerdict::Inconclusive
        } else {
            ContractionVerdict::NotContractive
        }
    }

    /// The contractive report, or the one closest to contraction.
    pub fn decisive(&self) -> Option<&ContractionReport> {
        match self.order {
            Some(r) => self.reports.iter().find(|rep| rep.r == r),
            None => self.reports.iter().min_by(|a, b| {
                let z = normal_quantile(a.ci_level);
                let ua = a.estimate.value() + z * a.std_error;
                let ub = b.estimate.value() + z * b.std_error;
                ua.total_cmp(&ub)
            }),
        }
    }
}

/// Scans `r = 1..=r_max` and stops at the first contractive order.
pub fn find_contraction_order(
    seq: &dyn MapSequence,
    r_max: usize,
    n_blocks: usize,
    probe: Option<&ProbePlan>,
    seed: u64,
) -> Result<ContractionScan> {
    let settings = ContractionSettings {
        n_blocks,
        probe: probe.cloned(),
        seed,
        ..ContractionSettings::default()
    };
    find_contraction_order_with(seq, r_max, &settings)
}

pub fn find_contraction_order_with(
    seq: &dyn MapSequence,
    r_max: usize,
    settings: &ContractionSettings,
) -> Result<ContractionScan> {
    if r_max == 0 {
        return Err(SreError::config("r_max must be >= 1"));
    }
    let mut reports = Vec::new();
    for r in 1..=r_max {
        let rep = estimate_contraction_with(seq, r, settings)?;
        let hit = rep.verdict == ContractionVerdict::Contractive;
        reports.push(rep);
        if hit {
            return Ok(ContractionScan { order: Some(r), reports });
        }
    }
    Ok(ContractionScan { order: None, reports })
}

/// Reports for every `r = 1..=r_max`, without stopping early.
pub fn contraction_sweep(seq: &dyn MapSequence, r_max: usize, settings: &ContractionSettings) -> Result<Vec<ContractionReport>> {
    (1..=r_max).map(|r| estimate_contraction_with(seq, r, settings)).collect()
}

/// Inputs to [`verify_conditions`].
pub struct ConditionBundle<'a> {
    pub seq: &'a dyn MapSequence,
    /// Present iff the perturbed-filter conditions are to be checked.
    pub perturbed: Option<&'a dyn MapSequence>,
    /// The anchor `y` shared by the moment and perturbation conditions.
    pub anchor: Vec<f64>,
    /// Draws of `‖Y_0‖` from the stationary solution.
    pub stationary_norm: Option<&'a dyn ScalarSampler>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySettings {
    pub n_samples: usize,
    pub r_max: usize,
    pub contraction: ContractionSettings,
    /// Horizon of the perturbation gap series.
    pub horizon: usize,
    pub fit: FitOptions,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            n_samples: 1000,
            r_max: 4,
            contraction: ContractionSettings::default(),
            horizon: 400,
            fit: FitOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapCheck {
    pub series: GapSeries,
    pub fit: RateFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionDossier {
    pub moments: Vec<MomentReport>,
    pub contraction: ContractionScan,
    /// `t ↦ ‖Φ̂_t(y) − Φ_t(y)‖`.
    pub map_gap: Option<GapCheck>,
    /// `t ↦ Λ(Φ̂_t − Φ_t)`.
    pub lipschitz_gap: Option<GapCheck>,
}

/// One line of the dossier table.
#[derive(Debug, Clone, PartialEq)]
pub struct DossierRow {
    pub condition_id: String,
    pub n: usize,
    pub estimate: String,
    pub std_error: f64,
    pub verdict: String,
    pub outcome: Outcome,
}

impl DossierRow {
    pub const CSV_HEADER: &'static str = "condition_id,n,estimate,std_error,verdict";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.condition_id,
            self.n,
            self.estimate,
            format_number(self.std_error),
            self.verdict
        )
    }

    pub fn from_fit(id: &str, fit: &RateFit) -> Self {
        Self {
            condition_id: id.into(),
            n: fit.n_used,
            estimate: format_number(fit.slope),
            std_error: fit.slope_se,
            verdict: fit.verdict.as_str().into(),
            outcome: rate_outcome(fit.verdict),
        }
    }
}

pub fn rate_outcome(v: RateVerdict) -> Outcome {
    match v {
        RateVerdict::Eas | RateVerdict::IdenticallyZero => Outcome::Pass,
        RateVerdict::Inconclusive => Outcome::Inconclusive,
        RateVerdict::NotEas => Outcome::Fail,
    }
}

impl ConditionDossier {
    pub fn rows(&self) -> Vec<DossierRow> {
        let mut rows: Vec<DossierRow> = self
            .moments
            .iter()
            .filter(|m| m.condition != ConditionId::P3i)
            .map(moment_row)
            .collect();
        if let Some(rep) = self.contraction.decisive() {
            rows.push(DossierRow {
                condition_id: "p1_ii".into(),
                n: rep.n_blocks,
                estimate: rep.estimate.to_string(),
                std_error: rep.std_error,
                verdict: self.contraction.verdict().as_str().into(),
                outcome: self.contraction.verdict().outcome(),
            });
        }
        rows.extend(self.moments.iter().filter(|m| m.condition == ConditionId::P3i).map(moment_row));
        if let Some(g) = &self.map_gap {
            rows.push(DossierRow::from_fit("p3_ii", &g.fit));
        }
        if let Some(g) = &self.lipschitz_gap {
            rows.push(DossierRow::from_fit("p3_iii", &g.fit));
        }
        rows
    }

    pub fn outcome(&self) -> Outcome {
        self.rows().iter().map(|r| r.outcome).max().unwrap_or(Outcome::Pass)
    }
}

fn moment_row(m: &MomentReport) -> DossierRow {
    DossierRow {
        condition_id: m.condition.as_str().into(),
        n: m.n_samples,
        estimate: format_number(m.empirical_mean),
        std_error: m.std_error,
        verdict: m.diagnostic().into(),
        outcome: m.outcome(),
    }
}

/// Runs every requested condition check on `bundle`.
pub fn verify_conditions(bundle: &ConditionBundle<'_>, settings: &VerifySettings) -> Result<ConditionDossier> {
    let seq = bundle.seq;
    check_admissible(seq)?;
    seq.space().check_member(&bundle.anchor)?;
    let seed = settings.contraction.seed;
    let (start, available) = time_window(seq);
    let n = match available {
        Some(avail) => settings.n_samples.min(avail as usize),
        None => settings.n_samples,
    };
    let anchor = bundle.anchor.as_slice();
    let space = seq.space().clone();
    let displacement = |i: u64, _: &mut rand_chacha::ChaCha8Rng| -> Result<f64> {
        let t = start + i as i64;
        let out = seq.map_at(t)?.evaluate(anchor)?;
        Ok(space.distance(&out, anchor))
    };
    let probe = settings.contraction.probe.as_ref();
    let coefficient = |i: u64, _: &mut rand_chacha::ChaCha8Rng| -> Result<f64> {
        let t = start + i as i64;
        Ok(lipschitz_coefficient(&seq.map_at(t)?, probe)?.value)
    };
    let mut moments = vec![
        check_logplus_moment(ConditionId::P1i, &displacement, n, seed)?,
        check_logplus_moment(ConditionId::P1iiLogPlus, &coefficient, n, seed)?,
    ];
    let contraction = find_contraction_order_with(seq, settings.r_max, &settings.contraction)?;
    let mut dossier = ConditionDossier {
        moments: Vec::new(),
        contraction,
        map_gap: None,
        lipschitz_gap: None,
    };
    if let Some(perturbed) = bundle.perturbed {
        crate::convergence::check_paired(seq, perturbed)?;
        if let Some(sampler) = bundle.stationary_norm {
            moments.push(check_logplus_moment(ConditionId::P3i, sampler, settings.n_samples, seed)?);
        }
        let horizon = settings.horizon as i64;
        let mut map_gaps = Vec::with_capacity(settings.horizon);
        let mut lip_gaps = Vec::with_capacity(settings.horizon);
        for t in 1..=horizon {
            let diff = difference_at(seq, perturbed, t)?;
            map_gaps.push(space.norm(&diff.evaluate(anchor)));
            lip_gaps.push(difference_coefficient(&diff, &space, probe)?.value);
        }
        let map_series = GapSeries::new(1, map_gaps)?;
        let lip_series = GapSeries::new(1, lip_gaps)?;
        dossier.map_gap = Some(GapCheck {
            fit: fit_rate_with(&map_series, &settings.fit),
            series: map_series,
        });
        dossier.lipschitz_gap = Some(GapCheck {
            fit: fit_rate_with(&lip_series, &settings.fit),
            series: lip_series,
        });
    }
    dossier.moments = moments;
    Ok(dossier)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_samplers() {
        let one = |_: u64, _: &mut rand_chacha::ChaCha8Rng| Ok(1.0);
        let rep = check_logplus_moment(ConditionId::P1i, &one, 100, 0).unwrap();
        assert_eq!((rep.empirical_mean, rep.std_error), (0.0, 0.0));
        let e2 = |_: u64, _: &mut rand_chacha::ChaCha8Rng| Ok(std::f64::consts::E.powi(2));
        let rep = check_logplus_moment(ConditionId::P1i, &e2, 100, 0).unwrap();
        assert!((rep.empirical_mean - 2.0).abs() < 1e-14);
    }

    #[test]
    fn moment_errors() {
        let neg = |_: u64, _: &mut rand_chacha::ChaCha8Rng| Ok(-1.0);
        assert!(matches!(
            check_logplus_moment(ConditionId::P1i, &neg, 100, 0),
            Err(SreError::NegativeSample { .. })
        ));
        let one = |_: u64, _: &mut rand_chacha::ChaCha8Rng| Ok(1.0);
        assert!(check_logplus_moment(ConditionId::P1i, &one, 99, 0).is_err());
    }

    #[test]
    fn tail_fractions_decrease() {
        let heavy = |i: u64, _: &mut rand_chacha::ChaCha8Rng| Ok((i as f64 * 0.05).exp());
        let rep = check_logplus_moment(ConditionId::P3i, &heavy, 1000, 0).unwrap();
        let [a, b, c] = rep.tail_fractions;
        assert!(a >= b && b >= c && c > 0.0);
        assert_eq!(rep.diagnostic(), "suspect");
    }

    #[test]
    fn verdict_arithmetic() {
        let z = normal_quantile(0.99);
        let f = |m| LogEstimate::Finite(m);
        use ContractionVerdict::*;
        let exact = WitnessKind::Exact;
        assert_eq!(ContractionReport::classify(f(-z * 0.1 - 1e-9), 0.1, 0.99, exact), Contractive);
        assert_eq!(ContractionReport::classify(f(-z * 0.1 + 1e-9), 0.1, 0.99, exact), Inconclusive);
        assert_eq!(ContractionReport::classify(f(z * 0.1 + 1e-9), 0.1, 0.99, exact), NotContractive);
        assert_eq!(ContractionReport::classify(f(0.0), 0.0, 0.99, exact), Inconclusive);
        assert_eq!(ContractionReport::classify(LogEstimate::NegInfinity, 0.0, 0.99, exact), Contractive);
        assert_eq!(
            ContractionReport::classify(f(-1.0), 0.0, 0.99, WitnessKind::SampledLowerBound),
            Inconclusive
        );
        assert_eq!(
            ContractionReport::classify(f(1.0), 0.0, 0.99, WitnessKind::SampledLowerBound),
            NotContractive
        );
        assert_eq!(ContractionReport::classify(f(-1.0), 0.0, 0.99, WitnessKind::UpperBound), Contractive);
        assert_eq!(ContractionReport::classify(f(1.0), 0.0, 0.99, WitnessKind::UpperBound), Inconclusive);
    }

    #[test]
    fn neg_infinity_token() {
        assert_eq!(LogEstimate::NegInfinity.to_string(), "-inf");
    }
}
