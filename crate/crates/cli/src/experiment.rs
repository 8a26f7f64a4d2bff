//! Model instantiation and the checks behind each subcommand.

use std::sync::Arc;

use rayon::prelude::*;
use sre_core::convergence::{
    coupling_gap, fit_rate_with, iterate_forward, lemma1_probe, lemma2_check, lemma3_probe, perturbed_gap, FitOptions,
    GapSeries, RateFit, Trajectory,
};
use sre_core::lyapunov::{
    contraction_sweep, verify_conditions, ConditionBundle,
    ContractionReport, ContractionScan, ContractionSettings, DossierRow, Outcome, VerifySettings,
};
use sre_core::models::{
    make_ar, make_garch, make_joint_filter, ArSequence, GarchSequence, GarchView, JointFilter, NoiseDistribution,
    NoiseSpec,
};
use sre_core::sampling::{AbsNoise, ScalarSampler};
use sre_core::{MapSequence, ProbePlan, SreError, StreamSeed};

use crate::config::{Check, ExperimentConfig, ModelConfig};
use crate::CliError;

/// Replicate streams used for independent stationary draws sit far above
/// any replicate index.
const STATIONARY_STREAMS: u64 = 1 << 63;

pub enum Instance {
    Ar(ArSequence),
    Garch(GarchSequence),
    Joint(JointFilter),
}

/// One replicate's realized model.
pub struct Built {
    pub config: ExperimentConfig,
    pub replicate: usize,
    pub instance: Instance,
}

impl Built {
    pub fn new(config: &ExperimentConfig, replicate: usize) -> Result<Self, CliError> {
        let seed = StreamSeed::new(config.run.seed).with_replicate(replicate as u64);
        let model = config.model.model_id();
        let wrap = |source: SreError| CliError::Model {
            model: model.into(),
            source,
        };
        let instance = match config.model {
            ModelConfig::Ar(p) => Instance::Ar(make_ar(p, seed).map_err(wrap)?),
            ModelConfig::Garch { params, view } => {
                let data = make_garch(params, seed, GarchView::DataGenerating, None).map_err(wrap)?;
                match view {
                    GarchView::DataGenerating => Instance::Garch(data),
                    GarchView::FilterGivenPath => {
                        let c = &config.checks;
                        let horizon = config.run.horizon.max(c.n_blocks * c.r_max).max(config.probe.n_samples);
                        let start = params.unconditional_variance().unwrap_or(params.omega);
                        let variance = iterate_forward(&data, &[start], horizon).map_err(wrap)?;
                        let path = Arc::new(data.observations(&variance));
                        Instance::Garch(make_garch(params, seed, view, Some(path)).map_err(wrap)?)
                    }
                }
            }
            ModelConfig::Joint(p) => Instance::Joint(make_joint_filter(p, seed, config.run.horizon).map_err(wrap)?),
        };
        Ok(Self {
            config: config.clone(),
            replicate,
            instance,
        })
    }

    pub fn model_error(&self, source: SreError) -> CliError {
        CliError::Model {
            model: self.config.model.model_id().into(),
            source,
        }
    }

    /// The exact sequence `Φ_t`.
    pub fn seq(&self) -> &dyn MapSequence {
        match &self.instance {
            Instance::Ar(s) => s,
            Instance::Garch(s) => s,
            Instance::Joint(j) => &j.exact,
        }
    }

    pub fn perturbed(&self) -> Option<&dyn MapSequence> {
        match &self.instance {
            Instance::Joint(j) => Some(&j.perturbed),
            _ => None,
        }
    }

    pub fn anchor(&self) -> Vec<f64> {
        let space = self.seq().space();
        match self.config.probe.anchor {
            Some(a) => vec![a],
            None => space.default_anchor(),
        }
    }

    /// Initial state of the forward recursions.
    pub fn y0(&self) -> Vec<f64> {
        if let Some(y) = self.config.run.y0 {
            return vec![y];
        }
        match (&self.instance, &self.config.model) {
            (Instance::Joint(j), _) => vec![j.path.sigma2(0).expect("path covers t = 0")],
            (_, ModelConfig::Garch { params, .. }) => vec![params.unconditional_variance().unwrap_or(params.omega)],
            _ => self.anchor(),
        }
    }

    fn probe(&self) -> Option<ProbePlan> {
        let p = &self.config.probe;
        match (p.lower, p.upper) {
            (Some(lo), Some(hi)) => Some(ProbePlan::new(vec![lo], vec![hi], p.n_pairs, self.config.run.seed)),
            _ => None,
        }
    }

    pub fn contraction_settings(&self) -> ContractionSettings {
        ContractionSettings {
            n_blocks: self.config.checks.n_blocks,
            ci_level: self.config.run.ci_level,
            probe: self.probe(),
            seed: self.config.run.seed ^ self.replicate as u64,
            cap_blocks: true,
        }
    }

    pub fn fit_options(&self) -> FitOptions {
        FitOptions {
            burn_in: Some(self.config.run.burn_in),
            ci_level: self.config.run.ci_level,
            ..FitOptions::default()
        }
    }

    fn moment_seed(&self) -> u64 {
        self.config.run.seed.wrapping_add((self.replicate as u64) << 40)
    }
}

/// `‖Y_0‖` for the joint model: `σ²_0` of independent burnt-in paths.
struct StationaryVariance {
    params: sre_core::models::JointFilterParams,
    seed: u64,
    replicate: u64,
}

impl ScalarSampler for StationaryVariance {
    fn sample(&self, index: u64, _: &mut sre_core::rng::StreamRng) -> sre_core::Result<f64> {
        let stream = StreamSeed::new(self.seed).with_replicate(STATIONARY_STREAMS | (self.replicate << 40) | index);
        let jf = make_joint_filter(self.params, stream, 1)?;
        Ok(jf.path.sigma2(0).expect("path covers t = 0").abs())
    }
}

/// A named gap series with its rate fit.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRun {
    pub name: String,
    pub series: GapSeries,
    pub fit: RateFit,
}

impl GapRun {
    fn new(name: &str, series: GapSeries, opts: &FitOptions) -> Self {
        Self {
            name: name.into(),
            fit: fit_rate_with(&series, opts),
            series,
        }
    }

    fn row(&self) -> DossierRow {
        DossierRow::from_fit(&self.name, &self.fit)
    }
}

/// Everything one replicate produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReplicateResult {
    pub replicate: usize,
    pub rows: Vec<DossierRow>,
    pub gaps: Vec<GapRun>,
    pub sweep: Vec<ContractionReport>,
    pub scan: Option<ContractionScan>,
}

impl ReplicateResult {
    pub fn outcome(&self) -> Outcome {
        self.rows.iter().map(|r| r.outcome).max().unwrap_or(Outcome::Pass)
    }
}

pub fn overall(results: &[ReplicateResult]) -> Outcome {
    results.iter().map(ReplicateResult::outcome).max().unwrap_or(Outcome::Pass)
}

/// Runs `job` for every replicate in parallel, returning results in
/// replicate order.
pub fn for_replicates<F>(config: &ExperimentConfig, job: F) -> Result<Vec<ReplicateResult>, CliError>
where
    F: Fn(&Built) -> Result<ReplicateResult, CliError> + Sync,
{
    (0..config.run.replicates)
        .into_par_iter()
        .map(|k| {
            let built = Built::new(config, k)?;
            let mut res = job(&built)?;
            res.replicate = k;
            Ok(res)
        })
        .collect()
}

/// The full dossier: every check listed in the config.
pub fn verify(b: &Built) -> Result<ReplicateResult, CliError> {
    let cfg = &b.config;
    let mut res = ReplicateResult::default();
    let want_p3 = cfg.wants(Check::P3);
    if cfg.wants(Check::P1) || want_p3 {
        let stationary = match &b.instance {
            Instance::Joint(j) => Some(StationaryVariance {
                params: *j.exact.params(),
                seed: cfg.run.seed,
                replicate: b.replicate as u64,
            }),
            _ => None,
        };
        let perturbed = if want_p3 { b.perturbed() } else { None };
        let bundle = ConditionBundle {
            seq: b.seq(),
            perturbed,
            anchor: b.anchor(),
            stationary_norm: stationary.as_ref().map(|s| s as &dyn ScalarSampler),
        };
        let settings = VerifySettings {
            n_samples: cfg.probe.n_samples,
            r_max: cfg.checks.r_max,
            contraction: ContractionSettings {
                seed: b.moment_seed(),
                ..b.contraction_settings()
            },
            horizon: cfg.run.horizon,
            fit: b.fit_options(),
        };
        let dossier = verify_conditions(&bundle, &settings).map_err(|e| b.model_error(e))?;
        res.rows.extend(
            dossier
                .rows()
                .into_iter()
                .filter(|r| cfg.wants(Check::P1) || !r.condition_id.starts_with("p1")),
        );
        if let Some(g) = dossier.map_gap {
            res.gaps.push(GapRun {
                name: "p3_ii".into(),
                series: g.series,
                fit: g.fit,
            });
        }
        if let Some(g) = dossier.lipschitz_gap {
            res.gaps.push(GapRun {
                name: "p3_iii".into(),
                series: g.series,
                fit: g.fit,
            });
        }
        res.scan = Some(dossier.contraction);
    }
    if cfg.wants(Check::P2) {
        let run = coupling(b)?;
        res.rows.push(run.row());
        res.gaps.push(run);
    }
    if want_p3 {
        let run = perturbation(b)?.expect("p3 is validated against the model");
        res.rows.push(run.row());
        res.gaps.push(run);
    }
    if cfg.wants(Check::Lyapunov) {
        let sweep = lyapunov(b)?.sweep;
        res.rows.push(sweep_row(&sweep, cfg.checks.n_blocks));
        res.sweep = sweep;
    }
    if cfg.wants(Check::LemmaProbes) {
        res.rows.extend(lemma_rows(cfg.run.seed.wrapping_add(b.replicate as u64))?);
    }
    Ok(res)
}

/// Coupling of two initializations under the same maps.
fn coupling(b: &Built) -> Result<GapRun, CliError> {
    let y0 = b.y0();
    let y0_prime: Vec<f64> = y0.iter().map(|v| v + b.config.run.coupling_offset).collect();
    let series = coupling_gap(b.seq(), &y0, &y0_prime, b.config.run.horizon).map_err(|e| b.model_error(e))?;
    Ok(GapRun::new("p2", series, &b.fit_options()))
}

/// `‖Ŷ_t − Y_t‖` for models with a perturbed filter.
fn perturbation(b: &Built) -> Result<Option<GapRun>, CliError> {
    let (Some(perturbed), Instance::Joint(j)) = (b.perturbed(), &b.instance) else {
        return Ok(None);
    };
    let y0 = b.y0();
    let y0_hat = [j.exact.params().sigma2_init];
    let series = perturbed_gap(b.seq(), perturbed, &y0, &y0_hat, b.config.run.horizon).map_err(|e| b.model_error(e))?;
    Ok(Some(GapRun::new("p3", series, &b.fit_options())))
}

/// Coupling and perturbation gaps with their rate fits.
pub fn converge(b: &Built) -> Result<ReplicateResult, CliError> {
    let mut res = ReplicateResult::default();
    let run = coupling(b)?;
    res.rows.push(run.row());
    res.gaps.push(run);
    if let Some(run) = perturbation(b)? {
        res.rows.push(run.row());
        res.gaps.push(run);
    }
    Ok(res)
}

/// Contraction estimates for every `r = 1..=r_max`.
pub fn lyapunov(b: &Built) -> Result<ReplicateResult, CliError> {
    let sweep = contraction_sweep(b.seq(), b.config.checks.r_max, &b.contraction_settings()).map_err(|e| b.model_error(e))?;
    let row = sweep_row(&sweep, b.config.checks.n_blocks);
    Ok(ReplicateResult {
        rows: vec![row],
        sweep,
        ..ReplicateResult::default()
    })
}

/// Contractive if some order is; the estimate shown is that order's.
fn sweep_row(sweep: &[ContractionReport], n_blocks: usize) -> DossierRow {
    let scan = ContractionScan {
        order: sweep
            .iter()
            .find(|r| r.verdict == sre_core::lyapunov::ContractionVerdict::Contractive)
            .map(|r| r.r),
        reports: sweep.to_vec(),
    };
    let verdict = scan.verdict();
    let (estimate, se, n) = match scan.decisive() {
        Some(rep) => (rep.estimate.to_string(), rep.std_error, rep.n_blocks),
        None => ("nan".into(), f64::NAN, n_blocks),
    };
    DossierRow {
        condition_id: "lyapunov".into(),
        n,
        estimate,
        std_error: se,
        verdict: verdict.as_str().into(),
        outcome: verdict.outcome(),
    }
}

pub const LEMMA2_PAIRS: usize = 100_000;
pub const LEMMA3_SEEDS: u64 = 20;
pub const LEMMA3_STEPS: usize = 5000;
pub const LEMMA1_STEPS: usize = 400;

/// Lemma 1–3 suites; each row is `consistent`, `violated` or a rate verdict.
pub fn lemma_rows(seed: u64) -> Result<Vec<DossierRow>, CliError> {
    let wrap = |source| CliError::Model {
        model: "lemma_probes".into(),
        source,
    };
    let verdict_row = |id: &str, n: usize, estimate: f64, ok: bool| DossierRow {
        condition_id: id.into(),
        n,
        estimate: sre_core::stats::format_number(estimate),
        std_error: 0.0,
        verdict: if ok { "consistent" } else { "violated" }.into(),
        outcome: if ok { Outcome::Pass } else { Outcome::Fail },
    };

    let y = AbsNoise(NoiseSpec::new(NoiseDistribution::LogNormal {
        meanlog: 0.0,
        sdlog: 1.0,
    }));
    let fit = lemma1_probe(1.0, LEMMA1_STEPS, &y, seed).map_err(wrap)?;
    let mut rows = vec![DossierRow::from_fit("lemma1", &fit)];

    let l2 = lemma2_check(LEMMA2_PAIRS, seed);
    let violations = l2.sum_violations + l2.product_violations;
    rows.push(verdict_row("lemma2", l2.pairs, violations as f64, violations == 0));

    // E log X = −0.1: γ = e^0.05 must drive the product to zero, γ = e^0.2 must not
    let x = NoiseSpec::new(NoiseDistribution::LogNormal {
        meanlog: -0.1,
        sdlog: 0.5,
    });
    let gammas = [0.05_f64.exp(), 0.2_f64.exp()];
    let outcomes = (0..LEMMA3_SEEDS)
        .into_par_iter()
        .map(|s| lemma3_probe(&x, LEMMA3_STEPS, &gammas, seed.wrapping_add(s)))
        .collect::<sre_core::Result<Vec<_>>>()
        .map_err(wrap)?;
    let agree = outcomes.iter().filter(|o| o[0].below && !o[1].below).count();
    rows.push(verdict_row(
        "lemma3",
        LEMMA3_SEEDS as usize,
        agree as f64 / LEMMA3_SEEDS as f64,
        agree == LEMMA3_SEEDS as usize,
    ));
    Ok(rows)
}

/// Rows of a trajectory table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: String,
    pub rows: Vec<String>,
}

pub fn simulate(b: &Built) -> Result<Table, CliError> {
    let horizon = b.config.run.horizon;
    let err = |e| b.model_error(e);
    let y0 = b.y0();
    Ok(match &b.instance {
        Instance::Ar(seq) => {
            let traj = iterate_forward(seq, &y0, horizon).map_err(err)?;
            scalar_table("t,y", &traj, |_| String::new())
        }
        Instance::Garch(seq) => match seq.view() {
            GarchView::DataGenerating => {
                let traj = iterate_forward(seq, &y0, horizon).map_err(err)?;
                let obs = seq.observations(&traj);
                scalar_table("t,sigma2,y", &traj, |t| format!(",{}", obs.at(t).expect("same times")[0]))
            }
            GarchView::FilterGivenPath => {
                let traj = iterate_forward(seq, &y0, horizon).map_err(err)?;
                scalar_table("t,sigma2", &traj, |_| String::new())
            }
        },
        Instance::Joint(j) => {
            let p = j.exact.params();
            let hat = iterate_forward(&j.perturbed, &[p.sigma2_init], horizon).map_err(err)?;
            let path = &j.path;
            let rows = (0..=horizon as i64)
                .map(|t| {
                    format!(
                        "{t},{},{},{},{},{}",
                        path.y(t).expect("path covers horizon"),
                        path.mu(t).expect("path covers horizon"),
                        path.sigma2(t).expect("path covers horizon"),
                        path.mu_bar(t).expect("path covers horizon"),
                        hat.at(t).expect("same times")[0]
                    )
                })
                .collect();
            Table {
                header: "t,y,mu,sigma2,mu_bar,sigma2_hat".into(),
                rows,
            }
        }
    })
}

fn scalar_table(header: &str, traj: &Trajectory, extra: impl Fn(i64) -> String) -> Table {
    Table {
        header: header.into(),
        rows: traj
            .times()
            .zip(&traj.states)
            .map(|(t, s)| format!("{t},{}{}", s[0], extra(t)))
            .collect(),
    }
}

/// Outcome of a batch of rows, for the exit code.
pub fn rows_outcome(rows: &[DossierRow]) -> Outcome {
    rows.iter().map(|r| r.outcome).max().unwrap_or(Outcome::Pass)
}
