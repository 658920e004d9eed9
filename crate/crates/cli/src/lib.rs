//! Configuration, dispatch and serialization for the `ramanpump` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use commands::{Command, Outcome};
pub use config::{parse_config, parse_config_str, GridSpec, RunConfig};
pub use error::{CliError, Result};
pub use output::{RunReport, SCHEMA_VERSION};

/// Directory for outputs: explicit choice, else the config's `output.dir`,
/// else `ramanpump-out`.
pub fn output_dir(explicit: Option<&Path>, cfg: &RunConfig) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("ramanpump-out"))
}

/// Runs `command`, writes its files and report into `dir`, and returns the
/// paths written. A failed oracle check is reported after the files exist.
pub fn execute(command: Command, cfg: &RunConfig, dir: &Path, jobs: Option<usize>) -> Result<Vec<PathBuf>> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    let outcome = pool.install(|| commands::run(command, cfg))?;
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        command: command.name(),
        config: cfg,
        diagnostics: ramanpump_core::validate_params(
            &cfg.molecule,
            &cfg.drive,
            &cfg.environment,
            &cfg.thresholds,
        ),
        result: outcome.result,
        files: outcome.files.iter().map(|f| f.name.clone()).collect(),
        failure: outcome.failure.clone(),
        duration_s: start.elapsed().as_secs_f64(),
    };
    let written = output::write_all(dir, &outcome.files, &report)?;
    match outcome.failure {
        Some(msg) => Err(CliError::Validation(msg)),
        None => Ok(written),
    }
}
