use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use ramanpump_core::Diagnostics;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Scientific notation with ten significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.9e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

impl OutputFile {
    pub fn new(name: &str, contents: String) -> OutputFile {
        OutputFile {
            name: name.to_string(),
            contents,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: &'a RunConfig,
    pub diagnostics: Diagnostics,
    pub result: serde_json::Value,
    pub files: Vec<String>,
    /// Set when the command ran but a check failed.
    pub failure: Option<String>,
    pub duration_s: f64,
}

pub fn write_all(dir: &Path, files: &[OutputFile], report: &RunReport) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating {}", dir.display()))
        .map_err(CliError::Io)?;
    let mut written = Vec::new();
    for f in files {
        let path = dir.join(&f.name);
        std::fs::write(&path, &f.contents)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CliError::Io)?;
        written.push(path);
    }
    let path = dir.join(format!("{}.report.json", report.command));
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    std::fs::write(&path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(CliError::Io)?;
    written.push(path);
    Ok(written)
}
