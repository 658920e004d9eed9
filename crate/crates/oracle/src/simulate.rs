use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use ramanpump_core::spectrum::FrequencyGrid;
use ramanpump_core::{DriveParams, Environment, MoleculeParams};

use crate::config::{InitialState, OracleConfig, Schedule};
use crate::demod::{fit_harmonic, time_average, Harmonic};
use crate::error::{OracleError, Result};
use crate::integrator::{Dopri5, StepStats};
use crate::master::{Basis, MasterEquation, SparseOp};
use crate::spectrum::{correlate_and_transform, OracleSpectrum};

pub const TRACE_TOLERANCE: f64 = 1e-8;
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

/// Worst deviations seen over the run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantReport {
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Default for InvariantReport {
    fn default() -> Self {
        InvariantReport {
            max_trace_error: 0.0,
            max_hermiticity_error: 0.0,
            min_eigenvalue: f64::INFINITY,
        }
    }
}

impl InvariantReport {
    fn check(&self) -> Result<()> {
        if !(self.max_trace_error <= TRACE_TOLERANCE) {
            return Err(OracleError::Invariant(format!(
                "trace drifted by {:e}",
                self.max_trace_error
            )));
        }
        if !(self.max_hermiticity_error <= HERMITICITY_TOLERANCE) {
            return Err(OracleError::Invariant(format!(
                "Hermiticity error {:e}",
                self.max_hermiticity_error
            )));
        }
        if !(self.min_eigenvalue >= -POSITIVITY_TOLERANCE) {
            return Err(OracleError::Invariant(format!(
                "negative eigenvalue {:e}",
                self.min_eigenvalue
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Component of `⟨b(t)⟩` multiplying `e^{−i2ω_IR t}`.
    pub b_amplitude: Complex64,
    pub b_fit: Harmonic,
    pub n_b_mean: f64,
    pub sigma_population: f64,
    pub top_fock_population: f64,
    /// False when the top Fock level got populated above the threshold.
    pub reliable: bool,
    pub n_bar: f64,
    pub schedule: Schedule,
    pub invariants: InvariantReport,
    pub stats: StepStats,
    pub spectrum: Option<OracleSpectrum>,
}

/// State of one master-equation integration.
#[derive(Clone)]
pub(crate) struct Run<'a> {
    pub basis: Basis,
    pub me: &'a MasterEquation,
    pub rho: Vec<Complex64>,
    pub t: f64,
    pub stepper: Dopri5,
    pub invariants: InvariantReport,
    pub top_population: f64,
    top: SparseOp,
}

pub(crate) fn occupation(mol: &MoleculeParams, env: &Environment, cfg: &OracleConfig) -> Result<f64> {
    match cfg.n_bar_override {
        Some(n) => Ok(n),
        None => Ok(env.occupation(mol.omega_v)?),
    }
}

impl<'a> Run<'a> {
    pub fn new(basis: Basis, me: &'a MasterEquation, cfg: &OracleConfig, n_bar: f64) -> Self {
        let rho = match cfg.initial_state {
            InitialState::Thermal => basis.ground_thermal_state(n_bar),
            InitialState::Vacuum => basis.ground_thermal_state(0.0),
        };
        Run {
            basis,
            me,
            rho,
            t: 0.0,
            stepper: Dopri5::new(basis.dim() * basis.dim(), cfg.tolerances(), cfg.max_steps),
            invariants: InvariantReport::default(),
            top_population: 0.0,
            top: basis.top_projector(),
        }
    }

    /// Advances to `t_end`, monitoring invariants after every accepted step
    /// and handing each accepted state to `sample`.
    pub fn evolve<F: FnMut(f64, &[Complex64])>(&mut self, t_end: f64, mut sample: F) -> Result<()> {
        let d = self.basis.dim();
        let inv = &mut self.invariants;
        let top = &self.top;
        let top_pop = &mut self.top_population;
        self.stepper.advance(self.me, &mut self.t, &mut self.rho, t_end, |t, rho| {
            let mut tr = Complex64::new(0.0, 0.0);
            let mut herm: f64 = 0.0;
            for i in 0..d {
                tr += rho[i * d + i];
                for j in i..d {
                    herm = herm.max((rho[i * d + j] - rho[j * d + i].conj()).norm());
                }
            }
            inv.max_trace_error = inv.max_trace_error.max((tr - 1.0).norm());
            inv.max_hermiticity_error = inv.max_hermiticity_error.max(herm);
            *top_pop = top_pop.max(top.expect(rho, d).re);
            sample(t, rho);
        })
    }

    /// Smallest eigenvalue of the Hermitian part of ρ.
    pub fn check_positivity(&mut self) {
        let d = self.basis.dim();
        let m = DMatrix::from_fn(d, d, |i, j| 0.5 * (self.rho[i * d + j] + self.rho[j * d + i].conj()));
        let min = m
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        self.invariants.min_eigenvalue = self.invariants.min_eigenvalue.min(min);
    }
}

/// Integrates the master equation through the demodulation window and
/// extracts the coherent vibrational amplitude at 2ω_IR plus time-averaged
/// populations.
pub fn simulate(
    mol: &MoleculeParams,
    drive: &DriveParams,
    env: &Environment,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    mol.check()?;
    drive.check()?;
    let schedule = cfg.schedule(mol)?;
    let n_bar = occupation(mol, env, cfg)?;
    let basis = Basis {
        fock_cutoff: cfg.fock_cutoff,
    };
    let me = MasterEquation::new(basis, mol, drive, n_bar);
    let mut run = Run::new(basis, &me, cfg, n_bar);
    let d = basis.dim();

    const CHECKPOINTS: usize = 16;
    for k in 1..=CHECKPOINTS {
        let t = schedule.t_start * k as f64 / CHECKPOINTS as f64;
        run.evolve(t, |_, _| {})?;
        run.check_positivity();
    }
    let at_window = cfg.spectrum.enabled.then(|| (run.rho.clone(), run.t));

    let b_op = basis.b();
    let num = basis.number();
    let pe = basis.excited_projector();
    let mut times = vec![run.t];
    let mut b_vals = vec![b_op.expect(&run.rho, d)];
    let mut n_vals = vec![num.expect(&run.rho, d).re];
    let mut e_vals = vec![pe.expect(&run.rho, d).re];
    for k in 1..=CHECKPOINTS {
        let t = schedule.t_start + (schedule.t_end - schedule.t_start) * k as f64 / CHECKPOINTS as f64;
        run.evolve(t, |t, rho| {
            times.push(t);
            b_vals.push(b_op.expect(rho, d));
            n_vals.push(num.expect(rho, d).re);
            e_vals.push(pe.expect(rho, d).re);
        })?;
        run.check_positivity();
    }
    if schedule.t_final > schedule.t_end {
        run.evolve(schedule.t_final, |_, _| {})?;
        run.check_positivity();
    }

    let spectrum = match at_window {
        Some((rho, t)) => {
            let grid = FrequencyGrid::probe_centered(mol, drive)?;
            Some(correlate_and_transform(
                basis, &me, mol, cfg, &schedule, rho, t, drive, &grid,
            )?)
        }
        None => None,
    };

    run.invariants.check()?;
    let fit = fit_harmonic(&times, &b_vals, 2.0 * drive.omega_ir);
    let invariants = run.invariants;
    Ok(OracleResult {
        b_amplitude: fit.minus,
        b_fit: fit,
        n_b_mean: time_average(&times, &n_vals),
        sigma_population: time_average(&times, &e_vals),
        top_fock_population: run.top_population,
        reliable: run.top_population <= cfg.truncation_threshold,
        n_bar,
        schedule,
        invariants,
        stats: run.stepper.stats,
        spectrum,
    })
}
