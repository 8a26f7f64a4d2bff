//! CSV tables and the text report.
//!
//! Every CSV starts with a `#` comment recording the toolkit version and
//! seed, then a header row. Numbers use Rust's shortest round-trip
//! formatting, so identical runs produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sre_core::convergence::RateFit;
use sre_core::lyapunov::{DossierRow, Outcome, MOMENT_CAVEAT};
use sre_core::stats::format_number;
use sre_core::VERSION;

use crate::config::{render, ExperimentConfig};
use crate::experiment::ReplicateResult;
use crate::{exit_code, CliError};

pub fn comment_line(config: &ExperimentConfig) -> String {
    format!(
        "sre {VERSION} seed={} model={} replicates={}",
        config.run.seed,
        config.model.model_id(),
        config.run.replicates
    )
}

/// Writes files into one output directory, serially.
pub struct OutputDir {
    dir: PathBuf,
    comment: String,
    pub written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(dir: &Path, config: &ExperimentConfig) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            comment: comment_line(config),
            written: Vec::new(),
        })
    }

    pub fn comment(&self) -> &str {
        &self.comment
    }

    pub fn csv(&mut self, name: &str, header: &str, rows: impl IntoIterator<Item = String>) -> Result<(), CliError> {
        let mut s = format!("# {}\n{header}\n", self.comment);
        for r in rows {
            s.push_str(&r);
            s.push('\n');
        }
        self.text(name, &s)
    }

    pub fn text(&mut self, name: &str, content: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, content).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }
}

pub const CONDITIONS_HEADER: &str = "replicate,condition_id,n,estimate,std_error,verdict";
pub const LYAPUNOV_HEADER: &str = "replicate,r,n_blocks,estimate,std_error,ci_level,verdict,witness";

pub fn ratefits_header() -> String {
    format!("replicate,series,{}", RateFit::CSV_HEADER)
}

pub fn condition_rows(results: &[ReplicateResult]) -> Vec<String> {
    results
        .iter()
        .flat_map(|r| r.rows.iter().map(move |row| format!("{},{}", r.replicate, row.csv())))
        .collect()
}

pub fn ratefit_rows(results: &[ReplicateResult]) -> Vec<String> {
    results
        .iter()
        .flat_map(|r| {
            r.gaps
                .iter()
                .map(move |g| format!("{},{},{}", r.replicate, g.name, g.fit.csv_fields()))
        })
        .collect()
}

pub fn lyapunov_rows(results: &[ReplicateResult]) -> Vec<String> {
    results
        .iter()
        .flat_map(|res| {
            res.sweep.iter().map(move |r| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    res.replicate,
                    r.r,
                    r.n_blocks,
                    r.estimate,
                    format_number(r.std_error),
                    r.ci_level,
                    r.verdict,
                    r.witness.as_str()
                )
            })
        })
        .collect()
}

/// Writes `gaps_<series>_r<replicate>.csv` for every gap series.
pub fn write_gaps(out: &mut OutputDir, results: &[ReplicateResult]) -> Result<(), CliError> {
    for res in results {
        for g in &res.gaps {
            let name = format!("gaps_{}_r{}.csv", g.name, res.replicate);
            let body = g.series.to_csv(out.comment());
            out.text(&name, &body)?;
        }
    }
    Ok(())
}

pub fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Inconclusive => "inconclusive",
        Outcome::Fail => "fail",
    }
}

fn push_rows(s: &mut String, rows: &[DossierRow]) {
    let _ = writeln!(s, "  {:<16} {:>7} {:>24} {:>24}  verdict", "condition", "n", "estimate", "std_error");
    for r in rows {
        let _ = writeln!(
            s,
            "  {:<16} {:>7} {:>24} {:>24}  {}",
            r.condition_id,
            r.n,
            r.estimate,
            format!("{:.6e}", r.std_error),
            r.verdict
        );
    }
}

/// Human-readable summary of a run.
pub fn report(title: &str, config: &ExperimentConfig, results: &[ReplicateResult], outcome: Outcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sre {VERSION} {title} report");
    let _ = writeln!(
        s,
        "model {} | seed {} | horizon {} | replicates {}",
        config.model.model_id(),
        config.run.seed,
        config.run.horizon,
        config.run.replicates
    );
    s.push_str("\nconfig\n");
    for line in render(config).lines() {
        if line.is_empty() {
            s.push('\n');
        } else {
            let _ = writeln!(s, "  {line}");
        }
    }
    for res in results {
        let _ = writeln!(s, "\nreplicate {}", res.replicate);
        if !res.rows.is_empty() {
            push_rows(&mut s, &res.rows);
        }
        if let Some(scan) = &res.scan {
            s.push_str("  contraction scan (E log Λ(Φ^(r)))\n");
            for r in &scan.reports {
                let note = r.note().map(|n| format!(" ({n})")).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "    r={} blocks={} estimate={} se={:.3e} {}{note} [{}]",
                    r.r,
                    r.n_blocks,
                    r.estimate,
                    r.std_error,
                    r.verdict,
                    r.witness.as_str()
                );
            }
        }
        if !res.sweep.is_empty() {
            s.push_str("  lyapunov sweep\n");
            for r in &res.sweep {
                let _ = writeln!(s, "    r={} estimate={} se={:.3e} {}", r.r, r.estimate, r.std_error, r.verdict);
            }
        }
        for g in &res.gaps {
            let (lo, hi) = g.fit.slope_ci();
            let _ = writeln!(
                s,
                "  rate fit {}: slope {:.6} (CI {:.4}..{:.4}), gamma_hat {:.6}, r2 {:.4}, n {} -> {}",
                g.name, g.fit.slope, lo, hi, g.fit.gamma_hat, g.fit.r_squared, g.fit.n_used, g.fit.verdict
            );
        }
    }
    s.push_str("\nnotes\n");
    let _ = writeln!(s, "  - {MOMENT_CAVEAT}.");
    s.push_str("  - Contraction and e.a.s. verdicts are statistical evidence at the stated CI level, not proofs.\n");
    let _ = writeln!(s, "\noutcome: {} (exit {})", outcome_word(outcome), exit_code(outcome));
    s
}
