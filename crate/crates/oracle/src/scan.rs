use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use ramanpump_core::{DriveParams, Environment, MoleculeParams};

use crate::config::OracleConfig;
use crate::error::Result;
use crate::simulate::simulate;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    /// `ω_v − 2ω_IR`
    pub detuning: f64,
    pub omega_ir: f64,
    pub b_amplitude: Complex64,
    pub b_squared: f64,
    pub reliable: bool,
}

/// `y = peak · Γ² / ((x − center)² + Γ²)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzFit {
    pub center: f64,
    pub half_width: f64,
    pub peak: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceScan {
    pub points: Vec<ScanPoint>,
    pub fit: Option<LorentzFit>,
}

/// Fits a Lorentzian through a quadratic fit of `1/y`, weighting each
/// point by `y²` so the residuals are relative errors in `y`.
pub fn fit_lorentzian(x: &[f64], y: &[f64]) -> Option<LorentzFit> {
    if x.len() < 3 || x.len() != y.len() || y.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let mut g = Matrix3::<f64>::zeros();
    let mut r = Vector3::<f64>::zeros();
    for (&xi, &yi) in x.iter().zip(y) {
        let w = yi * yi;
        let phi = [1.0, xi, xi * xi];
        for a in 0..3 {
            for b in 0..3 {
                g[(a, b)] += w * phi[a] * phi[b];
            }
            r[a] += w * phi[a] / yi;
        }
    }
    let p = g.lu().solve(&r)?;
    let (p0, p1, p2) = (p[0], p[1], p[2]);
    if !(p2 > 0.0) {
        return None;
    }
    let center = -p1 / (2.0 * p2);
    let gamma_sq = p0 / p2 - center * center;
    if !(gamma_sq > 0.0) {
        return None;
    }
    Some(LorentzFit {
        center,
        half_width: gamma_sq.sqrt(),
        peak: 1.0 / (p2 * gamma_sq),
    })
}

/// Runs the oracle at each detuning `ω_v − 2ω_IR` (in parallel) and fits a
/// Lorentzian to `|b|²`.
pub fn resonance_scan(
    mol: &MoleculeParams,
    drive: &DriveParams,
    env: &Environment,
    cfg: &OracleConfig,
    detunings: &[f64],
) -> Result<ResonanceScan> {
    let points = detunings
        .par_iter()
        .map(|&det| {
            let d = DriveParams {
                omega_ir: 0.5 * (mol.omega_v - det),
                ..*drive
            };
            let r = simulate(mol, &d, env, cfg)?;
            Ok(ScanPoint {
                detuning: det,
                omega_ir: d.omega_ir,
                b_amplitude: r.b_amplitude,
                b_squared: r.b_amplitude.norm_sqr(),
                reliable: r.reliable,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = points.iter().map(|p| p.detuning).collect();
    let y: Vec<f64> = points.iter().map(|p| p.b_squared).collect();
    Ok(ResonanceScan {
        fit: fit_lorentzian(&x, &y),
        points,
    })
}

/// `n` detunings evenly spread over `±span`.
pub fn symmetric_detunings(span: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    (0..n)
        .map(|k| -span + 2.0 * span * k as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLaw {
    pub rabi_ir: Vec<f64>,
    pub b_squared: Vec<f64>,
    /// Least-squares slope of `ln|b|²` against `ln Ω_IR`.
    pub exponent: f64,
}

/// Log-log slope of the coherent quanta against the pump strength.
pub fn power_law_scan(
    mol: &MoleculeParams,
    drive: &DriveParams,
    env: &Environment,
    cfg: &OracleConfig,
    factors: &[f64],
) -> Result<PowerLaw> {
    let rabi_ir: Vec<f64> = factors.iter().map(|f| f * drive.rabi_ir).collect();
    let b_squared = rabi_ir
        .par_iter()
        .map(|&r| {
            let d = DriveParams { rabi_ir: r, ..*drive };
            Ok(simulate(mol, &d, env, cfg)?.b_amplitude.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    let lx: Vec<f64> = rabi_ir.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = b_squared.iter().map(|v| v.ln()).collect();
    Ok(PowerLaw {
        exponent: slope(&lx, &ly),
        rabi_ir,
        b_squared,
    })
}

pub(crate) fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
