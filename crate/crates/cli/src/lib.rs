//! Batch experiment runner: parses an experiment config, runs the
//! requested condition checks and convergence experiments, and writes CSV
//! tables plus a text report.

pub mod config;
pub mod experiment;
pub mod output;

use std::path::PathBuf;

use sre_core::lyapunov::Outcome;
use thiserror::Error;

pub use config::{parse_config, render, Check, ConfigErrors, ExperimentConfig, ModelConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error("{model}: {source}")]
    Model {
        model: String,
        #[source]
        source: sre_core::SreError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Process exit codes.
pub mod exit {
    /// Every requested verdict passed.
    pub const PASS: i32 = 0;
    /// Some verdict was `not_contractive`, `not_eas` or `violated`.
    pub const FAIL: i32 = 1;
    /// Nothing failed but some verdict was inconclusive.
    pub const INCONCLUSIVE: i32 = 2;
    /// Config, numeric or I/O error.
    pub const RUNTIME_ERROR: i32 = 3;
    /// Unknown subcommand or malformed command line.
    pub const USAGE: i32 = 64;
}

pub fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Pass => exit::PASS,
        Outcome::Fail => exit::FAIL,
        Outcome::Inconclusive => exit::INCONCLUSIVE,
    }
}
