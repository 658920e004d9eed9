//! Symbolic emission spectra: delta lines plus Lorentzian lines.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineLabel {
    RayleighVis,
    RayleighIr,
    StokesVis,
    AntistokesVis,
    StokesIr,
    AntistokesIr,
    CoherentStokes,
    CoherentAntistokes,
}

impl LineLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            LineLabel::RayleighVis => "rayleigh_vis",
            LineLabel::RayleighIr => "rayleigh_ir",
            LineLabel::StokesVis => "stokes_vis",
            LineLabel::AntistokesVis => "antistokes_vis",
            LineLabel::StokesIr => "stokes_ir",
            LineLabel::AntistokesIr => "antistokes_ir",
            LineLabel::CoherentStokes => "coherent_stokes",
            LineLabel::CoherentAntistokes => "coherent_antistokes",
        }
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaLine {
    pub label: LineLabel,
    /// eV
    pub center: f64,
    pub weight: f64,
}

/// `weight · γ / ((ω_c − ω)² + γ²/4)`; integrates to `2π · weight`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzLine {
    pub label: LineLabel,
    pub center: f64,
    pub weight: f64,
    /// The γ_v of the line shape above (full width at half maximum).
    pub gamma: f64,
}

impl LorentzLine {
    pub fn eval(&self, omega: f64) -> f64 {
        let d = self.center - omega;
        self.weight * self.gamma / (d * d + 0.25 * self.gamma * self.gamma)
    }

    /// Exact integral over the whole real line.
    pub fn area(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.weight
    }
}

/// Emission spectrum in arbitrary intensity units (the radiation prefactor
/// `2|d_eg|²/3c³` is set to one).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SpectrumModel {
    pub delta_lines: Vec<DeltaLine>,
    pub lorentz_lines: Vec<LorentzLine>,
}

impl SpectrumModel {
    pub fn is_empty(&self) -> bool {
        self.delta_lines.is_empty() && self.lorentz_lines.is_empty()
    }

    /// Continuum value at `omega`; delta lines do not contribute.
    pub fn continuum(&self, omega: f64) -> f64 {
        self.lorentz_lines.iter().map(|l| l.eval(omega)).sum()
    }

    pub fn delta(&self, label: LineLabel) -> Option<&DeltaLine> {
        self.delta_lines.iter().find(|l| l.label == label)
    }

    pub fn lorentz(&self, label: LineLabel) -> Option<&LorentzLine> {
        self.lorentz_lines.iter().find(|l| l.label == label)
    }

    /// Concatenates the lines of two models.
    pub fn merged(mut self, other: &SpectrumModel) -> SpectrumModel {
        self.delta_lines.extend_from_slice(&other.delta_lines);
        self.lorentz_lines.extend_from_slice(&other.lorentz_lines);
        self
    }

    /// Multiplies every weight by `factor`.
    pub fn scaled(mut self, factor: f64) -> SpectrumModel {
        for l in &mut self.delta_lines {
            l.weight *= factor;
        }
        for l in &mut self.lorentz_lines {
            l.weight *= factor;
        }
        self
    }
}
