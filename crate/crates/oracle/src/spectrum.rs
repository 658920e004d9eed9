//! Emission spectrum from the two-time correlation `⟨σ†(t+τ)σ(t)⟩`.
//!
//! The correlation is obtained with the quantum regression theorem: `σρ(t)` is
//! propagated under the same time-dependent generator as ρ and contracted with
//! σ†. The start time t is averaged over one common period of the drives.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use ramanpump_core::spectrum::{FrequencyGrid, SpectrumPoint};
use ramanpump_core::{DriveParams, Environment, MoleculeParams};

use crate::config::{OracleConfig, Schedule, Window};
use crate::error::{OracleError, Result};
use crate::integrator::Dopri5;
use crate::master::{Basis, MasterEquation};
use crate::simulate::{occupation, Run};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    /// `Re Σ_τ c̄(τ) w(τ) e^{−iωτ} Δτ` on the requested grid.
    pub points: Vec<SpectrumPoint>,
    pub tau_step: f64,
    pub tau_max: f64,
    pub window: Window,
    /// Period over which the start time was averaged (0 without drives).
    pub period: f64,
    pub samples: usize,
    #[serde(skip)]
    correlation: Vec<Complex64>,
}

impl OracleSpectrum {
    fn weighted(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let n = self.correlation.len();
        self.correlation.iter().enumerate().map(move |(j, c)| {
            let tau = j as f64 * self.tau_step;
            let edge = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
            (tau, c * (edge * self.tau_step * self.window.weight(tau, self.tau_max)))
        })
    }

    /// Spectral density at `omega`.
    pub fn intensity(&self, omega: f64) -> f64 {
        self.weighted()
            .map(|(tau, c)| (c * Complex64::from_polar(1.0, -omega * tau)).re)
            .sum()
    }

    /// `∫_{lo}^{hi} S(ω) dω`, evaluated exactly on the sampled correlation.
    pub fn band_power(&self, lo: f64, hi: f64) -> f64 {
        self.weighted()
            .map(|(tau, c)| {
                let kernel = if tau == 0.0 {
                    Complex64::new(hi - lo, 0.0)
                } else {
                    (Complex64::from_polar(1.0, -lo * tau) - Complex64::from_polar(1.0, -hi * tau))
                        / Complex64::new(0.0, tau)
                };
                (c * kernel).re
            })
            .sum()
    }

    /// Averaged, unwindowed correlation on the τ grid.
    pub fn correlation(&self) -> &[Complex64] {
        &self.correlation
    }
}

/// Shortest `T` with both active drives periodic in T, or `None` when the
/// frequency ratio is not a ratio of small integers.
pub fn common_period(drive: &DriveParams) -> Option<f64> {
    let active: Vec<f64> = [(drive.rabi_vis, drive.omega_vis), (drive.rabi_ir, drive.omega_ir)]
        .iter()
        .filter(|(r, w)| *r != 0.0 && *w > 0.0)
        .map(|&(_, w)| w)
        .collect();
    let tau = 2.0 * std::f64::consts::PI;
    match active.as_slice() {
        [] => Some(0.0),
        [w] => Some(tau / w),
        [a, b] => {
            let ratio = a / b;
            (1..=1000u32).find_map(|q| {
                let p = (ratio * q as f64).round();
                ((p - ratio * q as f64).abs() <= 1e-9 * ratio * q as f64 && p >= 1.0)
                    .then(|| tau * q as f64 / b)
            })
        }
        _ => unreachable!(),
    }
}

/// Correlation sampling step: four samples per period of the fastest
/// frequency the TLS coherence can carry.
fn tau_step(mol: &MoleculeParams, drive: &DriveParams, tau_max: f64) -> (f64, usize) {
    let fastest = mol.omega0 + mol.omega_v + drive.omega_vis.max(drive.omega_ir);
    let target = std::f64::consts::PI / (2.0 * fastest);
    let n = (tau_max / target).ceil() as usize + 1;
    (tau_max / (n - 1) as f64, n)
}

/// Start times needed so that averaging over one period cancels the cross
/// terms between the strongest spectral components of `⟨σ⟩`, which lie within
/// `±(ω_drive + 2ω_IR + ω_v)`.
fn min_samples(mol: &MoleculeParams, drive: &DriveParams, period: f64) -> usize {
    let carrier = if drive.rabi_vis != 0.0 { drive.omega_vis } else { drive.omega_ir };
    let pump = if drive.rabi_ir != 0.0 { 2.0 * drive.omega_ir } else { 0.0 };
    let f_max = carrier + pump + mol.omega_v;
    (2.0 * f_max * period / (2.0 * std::f64::consts::PI)).floor() as usize + 1
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn correlate_and_transform(
    basis: Basis,
    me: &MasterEquation,
    mol: &MoleculeParams,
    cfg: &OracleConfig,
    schedule: &Schedule,
    rho: Vec<Complex64>,
    t0: f64,
    drive: &DriveParams,
    grid: &FrequencyGrid,
) -> Result<OracleSpectrum> {
    let settings = cfg.spectrum;
    let (period, samples) = match common_period(drive) {
        Some(p) if p > 0.0 => (p, settings.samples.max(min_samples(mol, drive, p))),
        Some(_) => (0.0, 1),
        None => {
            return Err(OracleError::InvalidConfig {
                field: "drive.omega_ir_eV",
                reason: "drive frequencies have no common period (ratio not p/q with q <= 1000)".into(),
            })
        }
    };
    let tau_max = schedule.tau_max;
    let d = basis.dim();

    // states ρ(t_k) at equally spaced start times over one period
    let mut run = Run::new(basis, me, cfg, 0.0);
    run.rho = rho;
    run.t = t0;
    let mut starts = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = t0 + period * k as f64 / samples as f64;
        run.evolve(t, |_, _| {})?;
        starts.push((run.t, run.rho.clone()));
    }

    let sigma = basis.sigma();
    let (dtau, n_tau) = tau_step(mol, drive, tau_max);
    let tol = cfg.tolerances();
    let max_steps = cfg.max_steps;

    let traces: Vec<Result<Vec<Complex64>>> = starts
        .into_par_iter()
        .map(|(t_k, rho_k)| {
            // X = σρ: row (g, n) of X is row (e, n) of ρ
            let mut x = vec![Complex64::new(0.0, 0.0); d * d];
            for &(r, c, v) in &sigma.entries {
                for j in 0..d {
                    x[r * d + j] += rho_k[c * d + j] * v;
                }
            }
            let contract = |x: &[Complex64]| -> Complex64 {
                // Tr(σ† X) = Σ σ_{rc} X_{rc}
                sigma.entries.iter().map(|&(r, c, v)| x[r * d + c] * v).sum()
            };
            let mut out = Vec::with_capacity(n_tau);
            out.push(contract(&x));
            let mut stepper = Dopri5::new(d * d, tol, max_steps);
            let mut t = t_k;
            for j in 1..n_tau {
                stepper.advance(me, &mut t, &mut x, t_k + j as f64 * dtau, |_, _| {})?;
                out.push(contract(&x));
            }
            Ok(out)
        })
        .collect();

    let mut correlation = vec![Complex64::new(0.0, 0.0); n_tau];
    for tr in traces {
        for (acc, c) in correlation.iter_mut().zip(tr?) {
            *acc += c / samples as f64;
        }
    }

    let mut spectrum = OracleSpectrum {
        points: Vec::new(),
        tau_step: dtau,
        tau_max,
        window: settings.window,
        period,
        samples,
        correlation,
    };
    spectrum.points = grid
        .points()
        .iter()
        .map(|&omega| SpectrumPoint {
            omega,
            intensity: spectrum.intensity(omega),
        })
        .collect();
    Ok(spectrum)
}

/// Regression-theorem emission spectrum on `grid`, with the quasi-stationary
/// start at the beginning of the demodulation window.
pub fn emission_spectrum(
    mol: &MoleculeParams,
    drive: &DriveParams,
    env: &Environment,
    cfg: &OracleConfig,
    grid: &FrequencyGrid,
) -> Result<OracleSpectrum> {
    mol.check()?;
    drive.check()?;
    let mut cfg = *cfg;
    cfg.spectrum.enabled = true;
    let schedule = cfg.schedule(mol)?;
    let n_bar = occupation(mol, env, &cfg)?;
    let basis = Basis {
        fock_cutoff: cfg.fock_cutoff,
    };
    let me = MasterEquation::new(basis, mol, drive, n_bar);
    let mut run = Run::new(basis, &me, &cfg, n_bar);
    run.evolve(schedule.t_start, |_, _| {})?;
    let (rho, t) = (run.rho.clone(), run.t);
    correlate_and_transform(basis, &me, mol, &cfg, &schedule, rho, t, drive, grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drive(rv: f64, wv: f64, ri: f64, wi: f64) -> DriveParams {
        DriveParams {
            omega_vis: wv,
            rabi_vis: rv,
            omega_ir: wi,
            rabi_ir: ri,
        }
    }

    #[test]
    fn periods() {
        let tau = 2.0 * std::f64::consts::PI;
        assert_eq!(common_period(&drive(0.0, 6.0, 0.0, 0.5)), Some(0.0));
        assert!((common_period(&drive(1.0, 6.0, 0.0, 0.5)).unwrap() - tau / 6.0).abs() < 1e-15);
        assert!((common_period(&drive(1.0, 6.0, 1.0, 0.5)).unwrap() - tau / 0.5).abs() < 1e-12);
        // 6 / 0.4 = 15
        assert!((common_period(&drive(1.0, 6.0, 1.0, 0.4)).unwrap() - tau / 0.4).abs() < 1e-12);
        // 2 / 0.3 = 20/3
        assert!((common_period(&drive(1.0, 2.0, 1.0, 0.3)).unwrap() - 3.0 * tau / 0.3).abs() < 1e-9);
        assert_eq!(common_period(&drive(1.0, 2.0_f64.sqrt(), 1.0, 1.0)), None);
    }

    #[test]
    fn transform_of_known_correlation() {
        // c(τ) = e^{(iω_c − Γ)τ}: band power over a wide band → π
        let (omega_c, gamma) = (5.0, 0.05);
        let tau_max = 400.0;
        let n = 40001;
        let dt = tau_max / (n - 1) as f64;
        let corr = (0..n)
            .map(|j| {
                let t = j as f64 * dt;
                Complex64::from_polar((-gamma * t).exp(), omega_c * t)
            })
            .collect();
        let s = OracleSpectrum {
            points: vec![],
            tau_step: dt,
            tau_max,
            window: Window::HalfHann,
            period: 0.0,
            samples: 1,
            correlation: corr,
        };
        let p = s.band_power(omega_c - 4.0, omega_c + 4.0);
        assert!((p - std::f64::consts::PI).abs() < 0.03 * std::f64::consts::PI, "{p}");
        assert!(s.intensity(omega_c) > 10.0 * s.intensity(omega_c + 1.0));
    }
}
