//! Run configuration: one JSON file per run, every energy key suffixed `_eV`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ramanpump_core::ensemble::{DispersionData, EnsembleParams};
use ramanpump_core::spectrum::FrequencyGrid;
use ramanpump_core::{DriveParams, Environment, MoleculeParams, Thresholds};
use ramanpump_oracle::OracleConfig;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub molecule: MoleculeParams,
    pub drive: DriveParams,
    #[serde(default)]
    pub environment: Environment,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub ensemble: Option<EnsembleSection>,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub detuning_scan: Option<DetuningScan>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub concentration_cm3: f64,
    #[serde(default)]
    pub volume_mm3: Option<f64>,
    #[serde(default)]
    pub molecules: Option<f64>,
    #[serde(default)]
    pub dispersion: Option<DispersionData>,
}

impl EnsembleSection {
    pub fn params(&self) -> EnsembleParams {
        EnsembleParams {
            concentration_cm3: self.concentration_cm3,
            volume_mm3: self.volume_mm3,
            molecules: self.molecules,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "omega_min_eV")]
    pub omega_min: f64,
    #[serde(rename = "omega_max_eV")]
    pub omega_max: f64,
    pub points: usize,
}

impl GridSpec {
    /// Parses `MIN,MAX,POINTS`.
    pub fn parse(s: &str) -> std::result::Result<GridSpec, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected MIN,MAX,POINTS, got `{s}`"));
        }
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        Ok(GridSpec {
            omega_min: num(parts[0])?,
            omega_max: num(parts[1])?,
            points: parts[2].parse().map_err(|e| format!("`{}`: {e}", parts[2]))?,
        })
    }

    pub fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::uniform(self.omega_min, self.omega_max, self.points)
            .map_err(|e| CliError::physics("output.grid", e))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    /// Spectrum grid; probe-centered when absent.
    pub grid: Option<GridSpec>,
    /// Draws delta lines as Lorentzians of this width in the sampled
    /// spectrum. Plotting aid only.
    #[serde(rename = "render_delta_width_eV")]
    pub render_delta_width: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Dotted path of a numeric field, e.g. `drive.rabi_ir_eV`.
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: Scale,
    /// Also run the master equation at every point.
    #[serde(default)]
    pub oracle: bool,
}

fn default_scale() -> Scale {
    Scale::Linear
}

impl SweepSection {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                let f = if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
                match self.scale {
                    Scale::Linear => self.min + f * (self.max - self.min),
                    Scale::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Parametric detunings `ω_v − 2ω_IR` for the χ³ and cross-section tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningScan {
    #[serde(rename = "span_eV")]
    pub span: f64,
    pub points: usize,
}

impl DetuningScan {
    pub fn default_for(mol: &MoleculeParams) -> DetuningScan {
        DetuningScan {
            span: 5.0 * mol.gamma_v,
            points: 101,
        }
    }
}

/// Reads and validates a config file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_syntax() || inner.is_eof() {
            CliError::Config(format!("malformed JSON: {inner}"))
        } else {
            CliError::Config(format!("{path}: {inner}"))
        }
    })?;
    cfg.check()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn check(&self) -> Result<()> {
        self.molecule.check().map_err(|e| CliError::physics("molecule", e))?;
        self.drive.check().map_err(|e| CliError::physics("drive", e))?;
        self.environment.check().map_err(|e| CliError::physics("environment", e))?;
        for (name, v) in [
            ("non_resonance", self.thresholds.non_resonance),
            ("thermal", self.thresholds.thermal),
            ("perturbative", self.thresholds.perturbative),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CliError::Config(format!("thresholds.{name}: must be positive")));
            }
        }
        if let Some(ens) = &self.ensemble {
            ens.params().molecule_count().map_err(|e| CliError::physics("ensemble", e))?;
            if let Some(d) = &ens.dispersion {
                d.check().map_err(|e| CliError::physics("ensemble", e))?;
            }
        }
        self.oracle.schedule(&self.molecule).map_err(CliError::oracle)?;
        if let Some(g) = &self.output.grid {
            g.grid()?;
        }
        if let Some(w) = self.output.render_delta_width {
            if !(w > 0.0) || !w.is_finite() {
                return Err(CliError::Config("output.render_delta_width_eV: must be positive".into()));
            }
        }
        if let Some(s) = &self.sweep {
            if s.points == 0 {
                return Err(CliError::Config("sweep.points: must be at least 1".into()));
            }
            if !s.min.is_finite() || !s.max.is_finite() {
                return Err(CliError::Config("sweep.min: bounds must be finite".into()));
            }
            if s.scale == Scale::Log && !(s.min > 0.0 && s.max > 0.0) {
                return Err(CliError::Config("sweep.min: log scale needs positive bounds".into()));
            }
            self.with_value(&s.parameter, s.min)?;
        }
        if let Some(d) = &self.detuning_scan {
            if !(d.span > 0.0) || d.points < 2 {
                return Err(CliError::Config(
                    "detuning_scan: need span_eV > 0 and at least 2 points".into(),
                ));
            }
        }
        Ok(())
    }

    /// Copy of the config with the numeric field at `path` set to `value`.
    /// The result is not re-validated; sweeps may cross invariant boundaries
    /// and report per point.
    pub fn with_value(&self, path: &str, value: f64) -> Result<RunConfig> {
        let mut tree = serde_json::to_value(self).expect("config serializes");
        let mut node = &mut tree;
        for key in path.split('.') {
            node = node
                .get_mut(key)
                .ok_or_else(|| CliError::Config(format!("sweep.parameter: no field `{path}`")))?;
        }
        if !node.is_number() {
            return Err(CliError::Config(format!(
                "sweep.parameter: `{path}` is not a numeric field"
            )));
        }
        *node = serde_json::json!(value);
        serde_json::from_value(tree)
            .map_err(|e| CliError::Config(format!("sweep.parameter: `{path}`: {e}")))
    }

    pub fn detunings(&self) -> Vec<f64> {
        let scan = self
            .detuning_scan
            .unwrap_or_else(|| DetuningScan::default_for(&self.molecule));
        let n = scan.points;
        (0..n)
            .map(|k| -scan.span + 2.0 * scan.span * k as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn ensemble(&self, command: &str) -> Result<EnsembleSection> {
        self.ensemble
            .ok_or_else(|| CliError::Config(format!("`{command}` needs an `ensemble` section")))
    }
}
