use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use sre_core::lyapunov::{DossierRow, Outcome};
use sre_core::models::ArParams;
use sre_cli::config::{Check, ExperimentConfig, ModelConfig};
use sre_cli::experiment::{self, for_replicates, overall, ReplicateResult};
use sre_cli::output::{self, OutputDir};
use sre_cli::{exit, exit_code, parse_config, CliError};

/// Stochastic recurrence equation experiments: contraction checks and
/// e.a.s. convergence diagnostics.
#[derive(Parser)]
#[command(name = "sre", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the simulated trajectory of each replicate.
    Simulate(Common),
    /// Sweep E log Λ(Φ^(r)) over r = 1..r_max.
    Lyapunov(Common),
    /// Coupling and perturbed-filter gaps with e.a.s. rate fits.
    Converge(Common),
    /// Full condition dossier for the checks listed in the config.
    Verify(Common),
    /// Lemma 1–3 probe suites.
    LemmaProbe(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override [run] seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Override [output] directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print nothing but errors.
    #[arg(long)]
    quiet: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,
    /// Write CSV tables even if [output] csv = false; plotting is left to
    /// external tools.
    #[arg(long)]
    emit_plot_data: bool,
}

impl Common {
    fn load(&self, required: bool) -> Result<ExperimentConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_config(&text)?
            }
            None if required => unreachable!("checked during argument parsing"),
            None => {
                let mut c = ExperimentConfig::new(ModelConfig::Ar(ArParams::default()));
                c.checks.list = vec![Check::LemmaProbes];
                c
            }
        };
        if let Some(seed) = self.seed {
            config.run.seed = seed;
        }
        if let Some(out) = &self.out {
            config.output.directory = out.clone();
        }
        if self.emit_plot_data {
            config.output.csv = true;
        }
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::PASS as u8 });
        }
    };
    let (name, common) = match &cli.command {
        Command::Simulate(c) => ("simulate", c),
        Command::Lyapunov(c) => ("lyapunov", c),
        Command::Converge(c) => ("converge", c),
        Command::Verify(c) => ("verify", c),
        Command::LemmaProbe(c) => ("lemma-probe", c),
    };
    if common.config.is_none() && !matches!(cli.command, Command::LemmaProbe(_)) {
        let _ = Cli::command()
            .error(
                clap::error::ErrorKind::MissingRequiredArgument,
                format!("`sre {name}` needs --config PATH"),
            )
            .print();
        return ExitCode::from(exit::USAGE as u8);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(exit::RUNTIME_ERROR as u8);
        }
    };
    let result = pool.install(|| run(name, &cli.command, common));
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::RUNTIME_ERROR as u8)
        }
    }
}

fn run(name: &str, command: &Command, common: &Common) -> Result<i32, CliError> {
    let config = common.load(!matches!(command, Command::LemmaProbe(_)))?;
    let mut out = OutputDir::create(&config.output.directory, &config)?;
    let csv = config.output.csv;
    let outcome = match command {
        Command::Simulate(_) => {
            let tables = (0..config.run.replicates)
                .map(|k| experiment::Built::new(&config, k).and_then(|b| experiment::simulate(&b)))
                .collect::<Result<Vec<_>, _>>()?;
            if csv {
                for (k, t) in tables.into_iter().enumerate() {
                    out.csv(&format!("trajectory_r{k}.csv"), &t.header, t.rows)?;
                }
            }
            Outcome::Pass
        }
        Command::LemmaProbe(_) => {
            let rows = experiment::lemma_rows(config.run.seed)?;
            let result = ReplicateResult {
                rows,
                ..ReplicateResult::default()
            };
            let outcome = result.outcome();
            if csv {
                out.csv(
                    "lemmas.csv",
                    DossierRow::CSV_HEADER,
                    result.rows.iter().map(DossierRow::csv),
                )?;
            }
            finish(name, &config, &mut out, &[result], outcome, common.quiet)?;
            return Ok(exit_code(outcome));
        }
        Command::Lyapunov(_) | Command::Converge(_) | Command::Verify(_) => {
            let results = match command {
                Command::Lyapunov(_) => for_replicates(&config, experiment::lyapunov)?,
                Command::Converge(_) => for_replicates(&config, experiment::converge)?,
                _ => for_replicates(&config, experiment::verify)?,
            };
            let outcome = overall(&results);
            if csv {
                if matches!(command, Command::Verify(_)) {
                    out.csv("conditions.csv", output::CONDITIONS_HEADER, output::condition_rows(&results))?;
                }
                if results.iter().any(|r| !r.gaps.is_empty()) {
                    output::write_gaps(&mut out, &results)?;
                    out.csv("ratefits.csv", &output::ratefits_header(), output::ratefit_rows(&results))?;
                }
                if results.iter().any(|r| !r.sweep.is_empty()) {
                    out.csv("lyapunov.csv", output::LYAPUNOV_HEADER, output::lyapunov_rows(&results))?;
                }
            }
            finish(name, &config, &mut out, &results, outcome, common.quiet)?;
            return Ok(exit_code(outcome));
        }
    };
    if !common.quiet {
        println!("{name}: wrote {} file(s) to {}", out.written.len(), config.output.directory.display());
    }
    Ok(exit_code(outcome))
}

fn finish(
    name: &str,
    config: &ExperimentConfig,
    out: &mut OutputDir,
    results: &[ReplicateResult],
    outcome: Outcome,
    quiet: bool,
) -> Result<(), CliError> {
    if config.output.report {
        out.text("report.txt", &output::report(name, config, results, outcome))?;
    }
    if !quiet {
        for res in results {
            for row in &res.rows {
                println!("[r{}] {:<14} {:>24}  {}", res.replicate, row.condition_id, row.estimate, row.verdict);
            }
        }
        println!(
            "{name}: {} (exit {}); wrote {} file(s) to {}",
            output::outcome_word(outcome),
            exit_code(outcome),
            out.written.len(),
            config.output.directory.display()
        );
    }
    Ok(())
}
