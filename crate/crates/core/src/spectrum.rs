//! Sampling symbolic spectra on frequency grids and integrating single lines.

use serde::Serialize;

use crate::analytic::{LineLabel, LorentzLine, SpectrumModel};
use crate::error::{PhysicsError, Result};
use crate::model::{DriveParams, MoleculeParams};
use crate::quad::{integrate, QuadOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn uniform(omega_min: f64, omega_max: f64, n_points: usize) -> Result<Self> {
        if !(omega_min < omega_max) || !omega_min.is_finite() || !omega_max.is_finite() {
            return Err(PhysicsError::invalid("grid", "omega_min must be below omega_max"));
        }
        if n_points < 2 {
            return Err(PhysicsError::invalid("grid", "at least two points required"));
        }
        let step = (omega_max - omega_min) / (n_points - 1) as f64;
        let mut points: Vec<f64> = (0..n_points).map(|i| omega_min + step * i as f64).collect();
        points[n_points - 1] = omega_max;
        Ok(Self { points })
    }

    pub fn explicit(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(PhysicsError::invalid("grid", "at least two points required"));
        }
        if points.iter().any(|w| !w.is_finite()) || points.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(PhysicsError::invalid("grid", "points must be finite and strictly increasing"));
        }
        Ok(Self { points })
    }

    /// 2001 points over `ω_vis ± 1.5 ω_v`.
    pub fn probe_centered(mol: &MoleculeParams, drive: &DriveParams) -> Result<Self> {
        let half = 1.5 * mol.omega_v;
        Self::uniform(drive.omega_vis - half, drive.omega_vis + half, 2001)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaMarker {
    pub label: LineLabel,
    pub omega: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMetadata {
    /// Width used to draw delta lines into the continuum, if any. Continuum
    /// values are then not physical near those lines.
    pub delta_render_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSpectrum {
    pub points: Vec<SpectrumPoint>,
    pub delta_markers: Vec<DeltaMarker>,
    pub metadata: SpectrumMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SampleOptions {
    pub render_delta_as: Option<f64>,
}

pub fn sample(model: &SpectrumModel, grid: &FrequencyGrid) -> SampledSpectrum {
    sample_with(model, grid, SampleOptions::default())
}

/// Like [`sample`], optionally drawing delta lines as Lorentzians of the given
/// width for plotting. Markers are reported either way.
pub fn sample_with(model: &SpectrumModel, grid: &FrequencyGrid, opts: SampleOptions) -> SampledSpectrum {
    let spikes: Vec<LorentzLine> = match opts.render_delta_as {
        Some(width) if width > 0.0 => model
            .delta_lines
            .iter()
            .map(|d| LorentzLine {
                label: d.label,
                center: d.center,
                weight: d.weight,
                gamma: width,
            })
            .collect(),
        _ => Vec::new(),
    };
    let points = grid
        .points()
        .iter()
        .map(|&omega| SpectrumPoint {
            omega,
            intensity: model.continuum(omega) + spikes.iter().map(|l| l.eval(omega)).sum::<f64>(),
        })
        .collect();
    SampledSpectrum {
        points,
        delta_markers: model
            .delta_lines
            .iter()
            .map(|d| DeltaMarker {
                label: d.label,
                omega: d.center,
                weight: d.weight,
            })
            .collect(),
        metadata: SpectrumMetadata {
            delta_render_width: if spikes.is_empty() { None } else { opts.render_delta_as },
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinePower {
    /// Exact integrated intensity.
    pub value: f64,
    /// Adaptive quadrature over `center ± 1000γ`; `None` for delta lines.
    pub quadrature: Option<f64>,
}

/// Frequency-integrated intensity of a single line.
pub fn integrated_line_power(model: &SpectrumModel, label: LineLabel) -> Result<LinePower> {
    if let Some(l) = model.lorentz(label) {
        let half_span = 1000.0 * l.gamma;
        let q = integrate(
            |w| l.eval(w),
            l.center - half_span,
            l.center + half_span,
            QuadOptions::default(),
        );
        return Ok(LinePower {
            value: l.area(),
            quadrature: Some(q.value),
        });
    }
    if let Some(d) = model.delta(label) {
        return Ok(LinePower {
            value: d.weight,
            quadrature: None,
        });
    }
    Err(PhysicsError::UnknownLine(label.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::DeltaLine;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn lorentz(center: f64, weight: f64, gamma: f64) -> LorentzLine {
        LorentzLine {
            label: LineLabel::StokesVis,
            center,
            weight,
            gamma,
        }
    }

    #[test]
    fn grid_validation() {
        assert!(FrequencyGrid::uniform(1.0, 1.0, 10).is_err());
        assert!(FrequencyGrid::uniform(0.0, 1.0, 1).is_err());
        assert!(FrequencyGrid::explicit(vec![0.0, 0.5, 0.5]).is_err());
        let g = FrequencyGrid::uniform(0.0, 1.0, 11).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g.points()[10], 1.0);
    }

    #[test]
    fn empty_model_samples_to_zero() {
        let g = FrequencyGrid::uniform(0.0, 1.0, 51).unwrap();
        let s = sample(&SpectrumModel::default(), &g);
        assert!(s.points.iter().all(|p| p.intensity == 0.0));
        assert!(s.delta_markers.is_empty());
    }

    #[test]
    fn peak_value() {
        let m = SpectrumModel {
            delta_lines: vec![],
            lorentz_lines: vec![lorentz(1.0, 2.5, 0.01)],
        };
        let g = FrequencyGrid::explicit(vec![0.9, 1.0, 1.1]).unwrap();
        let s = sample(&m, &g);
        assert_relative_eq!(s.points[1].intensity, 4.0 * 2.5 / 0.01, max_relative = 1e-14);
    }

    #[test]
    fn overlapping_lines_sum_pointwise() {
        let a = lorentz(1.0, 1.0, 0.05);
        let b = lorentz(1.02, 0.3, 0.08);
        let m = SpectrumModel {
            delta_lines: vec![],
            lorentz_lines: vec![a, b],
        };
        let g = FrequencyGrid::uniform(0.8, 1.2, 401).unwrap();
        for p in sample(&m, &g).points {
            let w = p.omega;
            let brute = 1.0 * 0.05 / ((1.0 - w).powi(2) + 0.05f64.powi(2) / 4.0)
                + 0.3 * 0.08 / ((1.02 - w).powi(2) + 0.08f64.powi(2) / 4.0);
            assert_relative_eq!(p.intensity, brute, max_relative = 1e-13);
        }
    }

    #[test]
    fn deltas_stay_out_of_continuum() {
        let m = SpectrumModel {
            delta_lines: vec![DeltaLine {
                label: LineLabel::RayleighVis,
                center: 1.0,
                weight: 7.0,
            }],
            lorentz_lines: vec![],
        };
        let g = FrequencyGrid::explicit(vec![0.5, 1.0, 1.5]).unwrap();
        let s = sample(&m, &g);
        assert!(s.points.iter().all(|p| p.intensity == 0.0));
        assert_eq!(s.delta_markers.len(), 1);
        assert_eq!(s.delta_markers[0].weight, 7.0);
        assert_eq!(s.metadata.delta_render_width, None);

        let r = sample_with(&m, &g, SampleOptions { render_delta_as: Some(0.1) });
        assert_eq!(r.metadata.delta_render_width, Some(0.1));
        assert_relative_eq!(r.points[1].intensity, 4.0 * 7.0 / 0.1, max_relative = 1e-14);
        assert_eq!(r.delta_markers.len(), 1);
    }

    #[test]
    fn line_power() {
        let m = SpectrumModel {
            delta_lines: vec![DeltaLine {
                label: LineLabel::RayleighIr,
                center: 0.05,
                weight: 0.4,
            }],
            lorentz_lines: vec![lorentz(1.0, 3.0, 1e-3)],
        };
        let l = integrated_line_power(&m, LineLabel::StokesVis).unwrap();
        assert_relative_eq!(l.value, 6.0 * PI, max_relative = 1e-15);
        assert!((l.quadrature.unwrap() - l.value).abs() / l.value <= 1e-3);
        let d = integrated_line_power(&m, LineLabel::RayleighIr).unwrap();
        assert_eq!(d.value, 0.4);
        assert_eq!(d.quadrature, None);
        assert!(matches!(
            integrated_line_power(&m, LineLabel::CoherentStokes),
            Err(PhysicsError::UnknownLine(_))
        ));
    }

    proptest! {
        #[test]
        fn sampling_is_linear(
            w1 in 0.0f64..10.0, w2 in 0.0f64..10.0, dw in 0.0f64..5.0,
            c in 0.9f64..1.1, gamma in 1e-3f64..0.1, k in 0.0f64..100.0,
        ) {
            let m = SpectrumModel {
                delta_lines: vec![DeltaLine { label: LineLabel::RayleighVis, center: 1.0, weight: dw }],
                lorentz_lines: vec![lorentz(c, w1, gamma), lorentz(c + 0.03, w2, 2.0 * gamma)],
            };
            let g = FrequencyGrid::uniform(0.8, 1.2, 101).unwrap();
            let a = sample(&m, &g);
            let b = sample(&m.clone().scaled(k), &g);
            for (p, q) in a.points.iter().zip(&b.points) {
                prop_assert!((q.intensity - k * p.intensity).abs() <= 1e-12 * (k * p.intensity).abs().max(1e-300));
            }
            for (p, q) in a.delta_markers.iter().zip(&b.delta_markers) {
                prop_assert!((q.weight - k * p.weight).abs() <= 1e-12 * (k * p.weight).abs().max(1e-300));
            }
        }

        #[test]
        fn line_power_independent_of_width(w in 0.1f64..10.0, g1 in 1e-4f64..1e-1, g2 in 1e-4f64..1e-1) {
            let one = SpectrumModel { delta_lines: vec![], lorentz_lines: vec![lorentz(1.0, w, g1)] };
            let two = SpectrumModel { delta_lines: vec![], lorentz_lines: vec![lorentz(1.0, w, g2)] };
            let a = integrated_line_power(&one, LineLabel::StokesVis).unwrap();
            let b = integrated_line_power(&two, LineLabel::StokesVis).unwrap();
            prop_assert_eq!(a.value, b.value);
            prop_assert!((a.quadrature.unwrap() - b.quadrature.unwrap()).abs() <= 1e-6 * a.value);
        }
    }
}
