//! `qbattery` experiment runner: TOML config in, CSV plus JSON sidecar out.

pub mod config;
pub mod experiments;
pub mod output;

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::json;

use config::{ExperimentConfig, ExperimentKind, LoadError};
pub use experiments::ExperimentResult;

#[derive(Debug)]
pub enum CliError {
    /// Every violation found in the config.
    Config(Vec<String>),
    Numerical(qbattery_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(e) if e.is_numerical_guard() => 3,
            CliError::Numerical(qbattery_core::Error::InvalidParameter(_)) => 2,
            CliError::Numerical(_) => 1,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(v) => {
                writeln!(f, "config validation failed:")?;
                for m in v {
                    writeln!(f, "  - {m}")?;
                }
                Ok(())
            }
            CliError::Numerical(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<qbattery_core::Error> for CliError {
    fn from(e: qbattery_core::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io(..) => CliError::Io(e.to_string()),
            LoadError::Parse(m) => CliError::Config(vec![m]),
        }
    }
}

/// Worker count: explicit flag, then config, then the machine.
pub fn resolve_workers(flag: Option<usize>, config: &ExperimentConfig) -> usize {
    flag.or(config.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

/// Validates and runs a config in-process.
pub fn execute(config: &ExperimentConfig, workers: usize) -> Result<ExperimentResult, CliError> {
    let problems = config.validate();
    if !problems.is_empty() {
        return Err(CliError::Config(problems));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    Ok(experiments::run_experiment(config, &pool)?)
}

pub fn default_output(kind: ExperimentKind) -> PathBuf {
    PathBuf::from(format!("results/{kind}.csv"))
}

/// Full command: load, check, run, write. Returns the CSV path.
pub fn run(
    kind: ExperimentKind,
    config_path: &Path,
    out: Option<&Path>,
    workers: Option<usize>,
) -> Result<PathBuf, CliError> {
    let config = ExperimentConfig::load(config_path)?;
    if config.experiment != kind {
        return Err(CliError::Config(vec![format!(
            "config describes '{}' but '{kind}' was requested",
            config.experiment
        )]));
    }
    let workers = resolve_workers(workers, &config);
    let result = execute(&config, workers)?;
    let csv_path = out
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| default_output(kind));
    let sidecar = json!({
        "experiment": kind.as_str(),
        "build": output::BUILD,
        "config": config,
        "summary": result.summary,
        "output": csv_path.display().to_string(),
        "rows": result.table.rows.len(),
    });
    output::write_files(&csv_path, &result.table, &sidecar)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", csv_path.display())))?;
    Ok(csv_path)
}
