//! Experiment configuration: a line-based `key = value` format with
//! bracketed section headers.
//!
//! ```text
//! [model]
//! model_id = ar
//! phi1 = 0.5
//!
//! [run]
//! seed = 7
//! horizon = 400
//!
//! [checks]
//! list = p1, p2
//! ```
//!
//! Lines starting with `#` or `;` are comments. Every section except
//! `[model]` is optional; omitted keys take their documented defaults.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;

use sre_core::models::{ArParams, GarchParams, GarchView, JointFilterParams, NoiseDistribution, NoiseSpec};

/// A problem in the config text, located by line when possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    fn global(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// Every error found in one pass over the config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_char('\n')?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelConfig {
    Ar(ArParams),
    Garch { params: GarchParams, view: GarchView },
    Joint(JointFilterParams),
}

impl ModelConfig {
    pub fn model_id(&self) -> &'static str {
        match self {
            ModelConfig::Ar(_) => sre_core::models::ar::MODEL_ID,
            ModelConfig::Garch { .. } => sre_core::models::garch::MODEL_ID,
            ModelConfig::Joint(_) => sre_core::models::joint::MODEL_ID,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    P1,
    P2,
    P3,
    Lyapunov,
    LemmaProbes,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::P1, Check::P2, Check::P3, Check::Lyapunov, Check::LemmaProbes];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::P1 => "p1",
            Check::P2 => "p2",
            Check::P3 => "p3",
            Check::Lyapunov => "lyapunov",
            Check::LemmaProbes => "lemma_probes",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Check::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    /// `T`, the number of recursion steps.
    pub horizon: usize,
    /// Leading gap points dropped before rate fits.
    pub burn_in: usize,
    pub replicates: usize,
    pub ci_level: f64,
    /// Initial state; `None` picks a model default.
    pub y0: Option<f64>,
    /// Distance between the two coupled initial states.
    pub coupling_offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChecksConfig {
    pub list: Vec<Check>,
    pub r_max: usize,
    pub n_blocks: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub csv: bool,
    pub report: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Anchor `y`; `None` means zero clipped into the state space.
    pub anchor: Option<f64>,
    /// Probe box for maps without an exact coefficient.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub n_pairs: usize,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub run: RunConfig,
    pub checks: ChecksConfig,
    pub output: OutputConfig,
    pub probe: ProbeConfig,
}

pub const DEFAULT_HORIZON: usize = 400;

impl ExperimentConfig {
    /// Defaults for everything but the model.
    pub fn new(model: ModelConfig) -> Self {
        let mut list = vec![Check::P1, Check::P2];
        if matches!(model, ModelConfig::Joint(_)) {
            list.push(Check::P3);
        }
        Self {
            model,
            run: RunConfig {
                seed: 0,
                horizon: DEFAULT_HORIZON,
                burn_in: DEFAULT_HORIZON / 10,
                replicates: 1,
                ci_level: 0.99,
                y0: None,
                coupling_offset: 1.0,
            },
            checks: ChecksConfig {
                list,
                r_max: 4,
                n_blocks: 1000,
            },
            output: OutputConfig {
                directory: PathBuf::from("out"),
                csv: true,
                report: true,
            },
            probe: ProbeConfig {
                anchor: None,
                lower: None,
                upper: None,
                n_pairs: 10_000,
                n_samples: 1000,
            },
        }
    }

    pub fn wants(&self, check: Check) -> bool {
        self.checks.list.contains(&check)
    }
}

struct Entry {
    value: String,
    line: usize,
}

struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

const SECTIONS: [&str; 5] = ["model", "run", "checks", "output", "probe"];

/// Parses and validates a config, reporting every problem found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let sections = split_sections(text, &mut errors);
    let mut cx = Cx {
        errors,
        sections,
    };
    let config = cx.build();
    if cx.errors.is_empty() {
        Ok(config.expect("config built without errors"))
    } else {
        cx.errors.sort_by_key(|e| e.line.unwrap_or(0));
        Err(ConfigErrors(cx.errors))
    }
}

fn split_sections(text: &str, errors: &mut Vec<ConfigError>) -> BTreeMap<String, Section> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    // keys under a rejected header were already covered by its error
    let mut rejected = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']').map(str::trim) else {
                errors.push(ConfigError::at(line, format!("malformed section header `{s}`")));
                current = None;
                rejected = true;
                continue;
            };
            if !SECTIONS.contains(&name) {
                errors.push(ConfigError::at(
                    line,
                    format!("unknown section [{name}] (expected one of {})", SECTIONS.join(", ")),
                ));
                current = None;
                rejected = true;
                continue;
            }
            if let Some(prev) = sections.get(name) {
                errors.push(ConfigError::at(
                    line,
                    format!("duplicate section [{name}] at lines {} and {line}", prev.line),
                ));
                current = None;
                rejected = true;
                continue;
            }
            sections.insert(
                name.to_string(),
                Section {
                    line,
                    entries: BTreeMap::new(),
                },
            );
            current = Some(name.to_string());
            rejected = false;
            continue;
        }
        let Some((key, value)) = s.split_once('=') else {
            errors.push(ConfigError::at(line, format!("expected `key = value`, found `{s}`")));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(name) = &current else {
            if !rejected {
                errors.push(ConfigError::at(line, format!("key `{key}` outside of any section")));
            }
            continue;
        };
        let section = sections.get_mut(name).expect("current section exists");
        if let Some(prev) = section.entries.get(key) {
            errors.push(ConfigError::at(
                line,
                format!("duplicate key `{key}` in [{name}] at lines {} and {line}", prev.line),
            ));
            continue;
        }
        section.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    sections
}

struct Cx {
    errors: Vec<ConfigError>,
    sections: BTreeMap<String, Section>,
}

/// Typed reads from one section, removing consumed keys so that leftovers
/// can be reported as unknown.
struct Reader<'a> {
    name: &'static str,
    entries: BTreeMap<String, Entry>,
    errors: &'a mut Vec<ConfigError>,
}

impl Reader<'_> {
    fn raw(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key).map(|e| (e.value, e.line))
    }

    fn typed<T>(&mut self, key: &str, what: &str, parse: impl Fn(&str) -> Option<T>) -> Option<(T, usize)> {
        let (value, line) = self.raw(key)?;
        match parse(&value) {
            Some(v) => Some((v, line)),
            None => {
                self.errors.push(ConfigError::at(
                    line,
                    format!("[{}] {key}: expected {what}, found `{value}`", self.name),
                ));
                None
            }
        }
    }

    fn float(&mut self, key: &str, default: f64) -> f64 {
        self.typed(key, "a finite real number", |s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
            .map_or(default, |v| v.0)
    }

    fn opt_float(&mut self, key: &str) -> Option<f64> {
        self.typed(key, "a finite real number", |s| s.parse::<f64>().ok().filter(|v| v.is_finite()))
            .map(|v| v.0)
    }

    fn count(&mut self, key: &str, default: usize) -> usize {
        self.typed(key, "a nonnegative integer", |s| s.parse::<usize>().ok())
            .map_or(default, |v| v.0)
    }

    fn opt_count(&mut self, key: &str) -> Option<usize> {
        self.typed(key, "a nonnegative integer", |s| s.parse::<usize>().ok()).map(|v| v.0)
    }

    fn flag(&mut self, key: &str, default: bool) -> bool {
        self.typed(key, "true or false", |s| match s {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        })
        .map_or(default, |v| v.0)
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }

    fn error(&mut self, line: usize, message: impl Into<String>) {
        self.errors.push(ConfigError::at(line, message));
    }

    fn finish(self, allowed: &str) {
        for (key, e) in self.entries {
            self.errors.push(ConfigError::at(
                e.line,
                format!("unknown key `{key}` in [{}] (allowed: {allowed})", self.name),
            ));
        }
    }
}

impl Cx {
    fn reader(&mut self, name: &'static str) -> Reader<'_> {
        let entries = self.sections.remove(name).map(|s| s.entries).unwrap_or_default();
        Reader {
            name,
            entries,
            errors: &mut self.errors,
        }
    }

    fn build(&mut self) -> Option<ExperimentConfig> {
        let model_line = self.sections.get("model").map(|s| s.line);
        let model = match model_line {
            None => {
                self.errors.push(ConfigError::global("missing [model] section"));
                None
            }
            Some(line) => self.model(line),
        };
        let fallback = ExperimentConfig::new(model.unwrap_or(ModelConfig::Ar(ArParams::default())));
        let run = self.run(&fallback.run);
        let checks = self.checks(&fallback.checks, model.as_ref());
        let output = self.output(&fallback.output);
        let probe = self.probe(&fallback.probe);
        Some(ExperimentConfig {
            model: model?,
            run,
            checks,
            output,
            probe,
        })
    }

    fn model(&mut self, section_line: usize) -> Option<ModelConfig> {
        let mut r = self.reader("model");
        let Some((id, id_line)) = r.raw("model_id") else {
            r.error(section_line, "[model] requires model_id (ar, garch or joint_filter)");
            return None;
        };
        let noise = |r: &mut Reader<'_>, default: NoiseSpec| -> NoiseSpec {
            match r.typed("noise", "normal, student_t(df), rademacher or lognormal(meanlog, sdlog)", parse_noise) {
                Some((d, _)) => NoiseSpec {
                    distribution: d,
                    scale: default.scale,
                },
                None => default,
            }
        };
        let model = match id.as_str() {
            "ar" => {
                let d = ArParams::default();
                let mut noise_spec = noise(&mut r, d.noise);
                let scale_line = r.line_of("noise_scale");
                noise_spec.scale = r.float("noise_scale", 1.0);
                let p = ArParams {
                    phi0: r.float("phi0", d.phi0),
                    phi1: r.float("phi1", d.phi1),
                    noise: noise_spec,
                };
                let line = scale_line.unwrap_or(id_line);
                validate(&mut r, line, p.validate());
                r.finish("model_id, phi0, phi1, noise, noise_scale");
                ModelConfig::Ar(p)
            }
            "garch" => {
                let d = GarchParams::default();
                let noise = noise(&mut r, d.noise);
                let view = r
                    .typed("view", "data_generating or filter_given_path", parse_view)
                    .map_or(GarchView::DataGenerating, |v| v.0);
                let lines = ["omega", "alpha", "beta"].map(|k| r.line_of(k));
                let p = GarchParams {
                    omega: r.float("omega", d.omega),
                    alpha: r.float("alpha", d.alpha),
                    beta: r.float("beta", d.beta),
                    noise,
                };
                if let Err(e) = p.validate() {
                    let line = blame(&e.to_string(), &["omega", "alpha", "beta"], &lines).unwrap_or(id_line);
                    r.error(line, format!("[model] {e}"));
                }
                r.finish("model_id, omega, alpha, beta, noise, view");
                ModelConfig::Garch { params: p, view }
            }
            "joint_filter" => {
                let d = JointFilterParams::default();
                let noise = noise(&mut r, d.noise);
                const KEYS: [&str; 9] = [
                    "omega_mu",
                    "alpha_mu",
                    "beta_mu",
                    "omega_sigma",
                    "alpha_sigma",
                    "beta_sigma",
                    "mu_init",
                    "sigma2_init",
                    "burn_in",
                ];
                let lines = KEYS.map(|k| r.line_of(k));
                let p = JointFilterParams {
                    omega_mu: r.float("omega_mu", d.omega_mu),
                    alpha_mu: r.float("alpha_mu", d.alpha_mu),
                    beta_mu: r.float("beta_mu", d.beta_mu),
                    omega_sigma: r.float("omega_sigma", d.omega_sigma),
                    alpha_sigma: r.float("alpha_sigma", d.alpha_sigma),
                    beta_sigma: r.float("beta_sigma", d.beta_sigma),
                    noise,
                    mu_init: r.float("mu_init", d.mu_init),
                    sigma2_init: r.float("sigma2_init", d.sigma2_init),
                    burn_in: r.count("burn_in", d.burn_in),
                };
                if let Err(e) = p.validate() {
                    let line = blame(&e.to_string(), &KEYS, &lines).unwrap_or(id_line);
                    r.error(line, format!("[model] {e}"));
                }
                r.finish(&format!("model_id, noise, {}", KEYS.join(", ")));
                ModelConfig::Joint(p)
            }
            other => {
                r.error(id_line, format!("unknown model_id `{other}` (expected ar, garch or joint_filter)"));
                // keys cannot be checked against an unknown model
                r.entries.clear();
                return None;
            }
        };
        Some(model)
    }

    fn run(&mut self, d: &RunConfig) -> RunConfig {
        let mut r = self.reader("run");
        let seed = r
            .typed("seed", "an unsigned 64-bit integer", |s| s.parse::<u64>().ok())
            .map_or(d.seed, |v| v.0);
        let horizon_line = r.line_of("horizon");
        let horizon = r.count("horizon", d.horizon);
        if horizon == 0 {
            r.error(horizon_line.unwrap_or(0), "[run] horizon must be >= 1");
        }
        let burn_line = r.line_of("burn_in");
        let burn_in = r.opt_count("burn_in").unwrap_or(horizon / 10);
        if burn_in >= horizon && horizon > 0 {
            r.error(burn_line.unwrap_or(0), format!("[run] burn_in {burn_in} must be < horizon {horizon}"));
        }
        let rep_line = r.line_of("replicates");
        let replicates = r.count("replicates", d.replicates);
        if replicates == 0 {
            r.error(rep_line.unwrap_or(0), "[run] replicates must be >= 1");
        }
        let ci_line = r.line_of("ci_level");
        let ci_level = r.float("ci_level", d.ci_level);
        if !(ci_level > 0.0 && ci_level < 1.0) {
            r.error(ci_line.unwrap_or(0), format!("[run] ci_level must lie in (0, 1), got {ci_level}"));
        }
        let y0 = r.opt_float("y0");
        let off_line = r.line_of("coupling_offset");
        let coupling_offset = r.float("coupling_offset", d.coupling_offset);
        if coupling_offset <= 0.0 {
            r.error(off_line.unwrap_or(0), "[run] coupling_offset must be > 0");
        }
        r.finish("seed, horizon, burn_in, replicates, ci_level, y0, coupling_offset");
        RunConfig {
            seed,
            horizon,
            burn_in,
            replicates,
            ci_level,
            y0,
            coupling_offset,
        }
    }

    fn checks(&mut self, d: &ChecksConfig, model: Option<&ModelConfig>) -> ChecksConfig {
        let mut r = self.reader("checks");
        let list = match r.raw("list") {
            None => d.list.clone(),
            Some((value, line)) => {
                let mut list = Vec::new();
                for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    match Check::parse(item) {
                        Some(c) if list.contains(&c) => r.error(line, format!("[checks] `{item}` listed twice")),
                        Some(c) => list.push(c),
                        None => r.error(
                            line,
                            format!(
                                "[checks] unknown check `{item}` (expected {})",
                                Check::ALL.map(Check::as_str).join(", ")
                            ),
                        ),
                    }
                }
                if list.contains(&Check::P3) && model.is_some_and(|m| !matches!(m, ModelConfig::Joint(_))) {
                    r.error(line, "[checks] p3 needs a perturbed filter; only model_id = joint_filter provides one");
                }
                list
            }
        };
        let rmax_line = r.line_of("r_max");
        let r_max = r.count("r_max", d.r_max);
        if r_max == 0 {
            r.error(rmax_line.unwrap_or(0), "[checks] r_max must be >= 1");
        }
        let nb_line = r.line_of("n_blocks");
        let n_blocks = r.count("n_blocks", d.n_blocks);
        if n_blocks < sre_core::lyapunov::MIN_BLOCKS {
            r.error(
                nb_line.unwrap_or(0),
                format!("[checks] n_blocks must be >= {}", sre_core::lyapunov::MIN_BLOCKS),
            );
        }
        r.finish("list, r_max, n_blocks");
        ChecksConfig { list, r_max, n_blocks }
    }

    fn output(&mut self, d: &OutputConfig) -> OutputConfig {
        let mut r = self.reader("output");
        let dir_line = r.line_of("directory");
        let directory = r.raw("directory").map_or(d.directory.clone(), |v| PathBuf::from(v.0));
        if directory.as_os_str().is_empty() {
            r.error(dir_line.unwrap_or(0), "[output] directory must not be empty");
        }
        let csv = r.flag("csv", d.csv);
        let report = r.flag("report", d.report);
        r.finish("directory, csv, report");
        OutputConfig { directory, csv, report }
    }

    fn probe(&mut self, d: &ProbeConfig) -> ProbeConfig {
        let mut r = self.reader("probe");
        let anchor = r.opt_float("anchor");
        let box_line = r.line_of("upper").or(r.line_of("lower"));
        let lower = r.opt_float("lower");
        let upper = r.opt_float("upper");
        match (lower, upper) {
            (Some(lo), Some(hi)) if lo >= hi => {
                r.error(box_line.unwrap_or(0), format!("[probe] lower {lo} must be < upper {hi}"))
            }
            (Some(_), None) | (None, Some(_)) => {
                r.error(box_line.unwrap_or(0), "[probe] lower and upper must be given together")
            }
            _ => {}
        }
        let np_line = r.line_of("n_pairs");
        let n_pairs = r.count("n_pairs", d.n_pairs);
        if n_pairs == 0 {
            r.error(np_line.unwrap_or(0), "[probe] n_pairs must be >= 1");
        }
        let ns_line = r.line_of("n_samples");
        let n_samples = r.count("n_samples", d.n_samples);
        if n_samples < sre_core::lyapunov::MIN_MOMENT_SAMPLES {
            r.error(
                ns_line.unwrap_or(0),
                format!("[probe] n_samples must be >= {}", sre_core::lyapunov::MIN_MOMENT_SAMPLES),
            );
        }
        r.finish("anchor, lower, upper, n_pairs, n_samples");
        ProbeConfig {
            anchor,
            lower,
            upper,
            n_pairs,
            n_samples,
        }
    }
}

fn validate(r: &mut Reader<'_>, line: usize, result: sre_core::Result<()>) {
    if let Err(e) = result {
        r.error(line, format!("[model] {e}"));
    }
}

/// Line of the first key named in an error message.
fn blame(message: &str, keys: &[&str], lines: &[Option<usize>]) -> Option<usize> {
    keys.iter()
        .zip(lines)
        .filter(|(k, _)| message.contains(*k))
        .max_by_key(|(k, _)| k.len())
        .and_then(|(_, l)| *l)
}

fn parse_view(s: &str) -> Option<GarchView> {
    match s {
        "data_generating" => Some(GarchView::DataGenerating),
        "filter_given_path" => Some(GarchView::FilterGivenPath),
        _ => None,
    }
}

fn parse_noise(s: &str) -> Option<NoiseDistribution> {
    let (name, args) = match s.split_once('(') {
        Some((n, rest)) => (n.trim(), Some(rest.strip_suffix(')')?)),
        None => (s, None),
    };
    let nums: Vec<f64> = match args {
        Some(a) => a
            .split(',')
            .map(|x| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect::<Option<_>>()?,
        None => Vec::new(),
    };
    match (name, nums.as_slice()) {
        ("normal", []) => Some(NoiseDistribution::StandardNormal),
        ("rademacher", []) => Some(NoiseDistribution::Rademacher),
        ("student_t", [df]) => Some(NoiseDistribution::StudentT { df: *df }),
        ("lognormal", [meanlog, sdlog]) => Some(NoiseDistribution::LogNormal {
            meanlog: *meanlog,
            sdlog: *sdlog,
        }),
        _ => None,
    }
}

fn render_noise(d: &NoiseDistribution) -> String {
    match d {
        NoiseDistribution::StandardNormal => "normal".into(),
        NoiseDistribution::Rademacher => "rademacher".into(),
        NoiseDistribution::StudentT { df } => format!("student_t({df})"),
        NoiseDistribution::LogNormal { meanlog, sdlog } => format!("lognormal({meanlog}, {sdlog})"),
        #[allow(unreachable_patterns)]
        _ => "normal".into(),
    }
}

/// Writes every field explicitly; `parse_config(&render(c)) == Ok(c)`.
pub fn render(c: &ExperimentConfig) -> String {
    let mut s = String::new();
    s.push_str("[model]\n");
    let mut lines: Vec<(String, String)> = vec![("model_id".into(), c.model.model_id().into())];
    match &c.model {
        ModelConfig::Ar(p) => {
            lines.push(("phi0".into(), p.phi0.to_string()));
            lines.push(("phi1".into(), p.phi1.to_string()));
            lines.push(("noise".into(), render_noise(&p.noise.distribution)));
            lines.push(("noise_scale".into(), p.noise.scale.to_string()));
        }
        ModelConfig::Garch { params: p, view } => {
            lines.push(("omega".into(), p.omega.to_string()));
            lines.push(("alpha".into(), p.alpha.to_string()));
            lines.push(("beta".into(), p.beta.to_string()));
            lines.push(("noise".into(), render_noise(&p.noise.distribution)));
            let v = match view {
                GarchView::DataGenerating => "data_generating",
                GarchView::FilterGivenPath => "filter_given_path",
            };
            lines.push(("view".into(), v.into()));
        }
        ModelConfig::Joint(p) => {
            for (k, v) in [
                ("omega_mu", p.omega_mu),
                ("alpha_mu", p.alpha_mu),
                ("beta_mu", p.beta_mu),
                ("omega_sigma", p.omega_sigma),
                ("alpha_sigma", p.alpha_sigma),
                ("beta_sigma", p.beta_sigma),
                ("mu_init", p.mu_init),
                ("sigma2_init", p.sigma2_init),
            ] {
                lines.push((k.into(), v.to_string()));
            }
            lines.push(("noise".into(), render_noise(&p.noise.distribution)));
            lines.push(("burn_in".into(), p.burn_in.to_string()));
        }
    }
    push_lines(&mut s, &lines);

    s.push_str("\n[run]\n");
    let r = &c.run;
    let mut lines = vec![
        ("seed".into(), r.seed.to_string()),
        ("horizon".into(), r.horizon.to_string()),
        ("burn_in".into(), r.burn_in.to_string()),
        ("replicates".into(), r.replicates.to_string()),
        ("ci_level".into(), r.ci_level.to_string()),
    ];
    if let Some(y0) = r.y0 {
        lines.push(("y0".into(), y0.to_string()));
    }
    lines.push(("coupling_offset".into(), r.coupling_offset.to_string()));
    push_lines(&mut s, &lines);

    s.push_str("\n[checks]\n");
    let list: Vec<&str> = c.checks.list.iter().map(|c| c.as_str()).collect();
    push_lines(
        &mut s,
        &[
            ("list".into(), list.join(", ")),
            ("r_max".into(), c.checks.r_max.to_string()),
            ("n_blocks".into(), c.checks.n_blocks.to_string()),
        ],
    );

    s.push_str("\n[output]\n");
    push_lines(
        &mut s,
        &[
            ("directory".into(), c.output.directory.display().to_string()),
            ("csv".into(), c.output.csv.to_string()),
            ("report".into(), c.output.report.to_string()),
        ],
    );

    s.push_str("\n[probe]\n");
    let p = &c.probe;
    let mut lines = Vec::new();
    if let Some(a) = p.anchor {
        lines.push(("anchor".into(), a.to_string()));
    }
    if let (Some(lo), Some(hi)) = (p.lower, p.upper) {
        lines.push(("lower".into(), lo.to_string()));
        lines.push(("upper".into(), hi.to_string()));
    }
    lines.push(("n_pairs".into(), p.n_pairs.to_string()));
    lines.push(("n_samples".into(), p.n_samples.to_string()));
    push_lines(&mut s, &lines);
    s
}

fn push_lines(s: &mut String, lines: &[(String, String)]) {
    for (k, v) in lines {
        let _ = writeln!(s, "{k} = {v}");
    }
}
