//! Third-order susceptibility of the pumped gas and the spontaneous Stokes
//! cross-section it can be inferred from.
//!
//! χ³ is reported in nm³/eV (Gaussian units with lengths in nm and energies in
//! eV); [`Chi3Value::to_esu`] converts to cm³/erg. Cross-sections are in nm².

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::coherent::{coherent_bracket, Branch};
use crate::error::{PhysicsError, Result};
use crate::model::{DriveParams, MoleculeParams};
use crate::quad::{integrate_peaked_to_infinity, QuadOptions};
use crate::units::{
    dipole_fourth_power, wavenumber, EV_IN_ERG, E_SQUARED_EV_NM, HBAR_C_EV_NM, PER_CM3_IN_PER_NM3,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Chi3Value {
    /// nm³/eV
    pub value: Complex64,
    pub branch: Branch,
}

impl Chi3Value {
    /// Value in esu (cm³/erg).
    pub fn to_esu(&self) -> Complex64 {
        self.value * (1e-21 / EV_IN_ERG)
    }
}

fn density_nm3(concentration_cm3: f64) -> Result<f64> {
    if !(concentration_cm3 >= 0.0) || !concentration_cm3.is_finite() {
        return Err(PhysicsError::domain("concentration must be non-negative"));
    }
    Ok(concentration_cm3 * PER_CM3_IN_PER_NM3)
}

fn electronic_prefactor(
    mol: &MoleculeParams,
    drive: &DriveParams,
    concentration_cm3: f64,
    branch: Branch,
) -> Result<f64> {
    let n = density_nm3(concentration_cm3)?;
    let pump = mol.omega0 * mol.omega0 - drive.omega_ir * drive.omega_ir;
    let line = branch.frequency(drive) - mol.omega0;
    if pump == 0.0 || line == 0.0 {
        return Err(PhysicsError::domain("χ³ denominator vanishes"));
    }
    if drive.omega_stokes() == 0.0 {
        return Err(PhysicsError::domain("coherent Stokes line at zero frequency"));
    }
    Ok(n * dipole_fourth_power(mol.d_eg) / (pump * line))
}

/// `χ³(ω_vis ± 2ω_IR; ω_vis, ω_IR)`: electronic background times the same
/// resonance bracket that shapes the coherent sideband intensities.
pub fn chi3(
    mol: &MoleculeParams,
    drive: &DriveParams,
    concentration_cm3: f64,
    branch: Branch,
) -> Result<Chi3Value> {
    let pre = electronic_prefactor(mol, drive, concentration_cm3, branch)?;
    Ok(Chi3Value {
        value: pre * coherent_bracket(mol, drive, branch)?,
        branch,
    })
}

/// The vibrationally resonant part of [`chi3`] (bracket minus one).
pub fn chi3_resonant_part(
    mol: &MoleculeParams,
    drive: &DriveParams,
    concentration_cm3: f64,
    branch: Branch,
) -> Result<Chi3Value> {
    let pre = electronic_prefactor(mol, drive, concentration_cm3, branch)?;
    Ok(Chi3Value {
        value: pre * (coherent_bracket(mol, drive, branch)? - 1.0),
        branch,
    })
}

/// Spontaneous Stokes frequency `ω_vis − ω_v`.
fn raman_stokes(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    let w = drive.omega_vis - mol.omega_v;
    if w <= 0.0 {
        return Err(PhysicsError::domain("Stokes frequency must be positive"));
    }
    if w == mol.omega0 || drive.omega_vis == mol.omega0 {
        return Err(PhysicsError::domain("Stokes or probe line resonant with the TLS"));
    }
    Ok(w)
}

/// Closed-form spontaneous Stokes cross-section
/// `σ = (4π/3) k_St⁴ |d_eg|⁴ g² / ((ω_vis − ω₀)² (ω₀ − ω_St)²)` in nm².
pub fn stokes_cross_section(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    let w_st = raman_stokes(mol, drive)?;
    let k = wavenumber(w_st);
    let probe = drive.omega_vis - mol.omega0;
    let line = mol.omega0 - w_st;
    Ok(4.0 * PI / 3.0 * k.powi(4) * dipole_fourth_power(mol.d_eg) * mol.g * mol.g
        / (probe * probe * line * line))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossSectionQuadrature {
    /// nm²
    pub sigma: f64,
    pub quadrature_error: f64,
}

/// Cross-section from the Stokes line spectrum: the emitted power integrated
/// over `ω ∈ [0, ∞)` per unit cyclic frequency, divided by the incident flux
/// `cE²/8π`. `n_bar` is the thermal occupation carried by the Stokes line.
pub fn stokes_cross_section_quadrature(
    mol: &MoleculeParams,
    drive: &DriveParams,
    n_bar: f64,
) -> Result<CrossSectionQuadrature> {
    let w_st = raman_stokes(mol, drive)?;
    let c = HBAR_C_EV_NM;
    let d2 = mol.d_eg * mol.d_eg * E_SQUARED_EV_NM;
    // σ is independent of the probe strength; any positive Rabi energy will do.
    let rabi = if drive.rabi_vis > 0.0 { drive.rabi_vis } else { 1.0 };
    let field_sq = rabi * rabi / d2;
    let probe = drive.omega_vis - mol.omega0;
    let line = mol.omega0 - w_st;
    let gamma = mol.gamma_v;
    let amplitude = 2.0 * w_st.powi(4) / (3.0 * c * c * c) * d2 / 4.0 * (rabi / probe).powi(2)
        * mol.g * mol.g
        / (line * line)
        * (1.0 + n_bar)
        * gamma;
    let spectrum = |w: f64| {
        let d = w_st - w;
        amplitude / (d * d + 0.25 * gamma * gamma)
    };
    let q = integrate_peaked_to_infinity(
        spectrum,
        0.0,
        w_st,
        gamma,
        QuadOptions {
            rel_tol: 1e-12,
            ..QuadOptions::default()
        },
    );
    let flux = c * field_sq / (8.0 * PI);
    Ok(CrossSectionQuadrature {
        sigma: q.value / (2.0 * PI) / flux,
        quadrature_error: q.error / (2.0 * PI) / flux,
    })
}

/// Stokes-branch χ³ inferred from a measured spontaneous cross-section.
pub fn chi3_from_cross_section(
    mol: &MoleculeParams,
    drive: &DriveParams,
    concentration_cm3: f64,
    sigma: f64,
) -> Result<Chi3Value> {
    if !(sigma >= 0.0) {
        return Err(PhysicsError::domain("cross-section must be non-negative"));
    }
    let n = density_nm3(concentration_cm3)?;
    let w_st = raman_stokes(mol, drive)?;
    let k = wavenumber(w_st);
    let pump = mol.omega0 * mol.omega0 - drive.omega_ir * drive.omega_ir;
    if pump == 0.0 {
        return Err(PhysicsError::domain("omega_ir equals omega0"));
    }
    let resonance = Complex64::new(mol.parametric_detuning(drive), mol.gamma_v);
    let value = 3.0 / (32.0 * PI) * n / k.powi(4)
        * (drive.omega_vis - mol.omega0)
        * (w_st - mol.omega0)
        / (pump * resonance)
        * sigma;
    Ok(Chi3Value {
        value,
        branch: Branch::Stokes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::organic;
    use approx::assert_relative_eq;

    #[test]
    fn linear_in_concentration() {
        let (mol, drive, _) = organic();
        for b in [Branch::Stokes, Branch::AntiStokes] {
            let a = chi3(&mol, &drive, 1e18, b).unwrap().value;
            let c = chi3(&mol, &drive, 2e18, b).unwrap().value;
            assert_relative_eq!(c.norm() / a.norm(), 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn background_only_without_coupling() {
        let (mut mol, drive, _) = organic();
        mol.g = 0.0;
        let x = chi3(&mol, &drive, 1e18, Branch::AntiStokes).unwrap().value;
        assert_eq!(x.im, 0.0);
        let n = 1e18 * 1e-21;
        let expected = n * dipole_fourth_power(mol.d_eg)
            / ((9.0 - 0.0025) * (drive.omega_anti_stokes() - mol.omega0));
        assert_relative_eq!(x.re, expected, max_relative = 1e-14);
    }

    #[test]
    fn bracket_shared_with_sideband_weights() {
        let (mol, drive, _) = organic();
        for b in [Branch::Stokes, Branch::AntiStokes] {
            let x = chi3(&mol, &drive, 1e18, b).unwrap().value;
            let pre = electronic_prefactor(&mol, &drive, 1e18, b).unwrap();
            let bracket = coherent_bracket(&mol, &drive, b).unwrap();
            assert!((x / pre - bracket).norm() <= 1e-12 * bracket.norm());
        }
    }

    #[test]
    fn imaginary_part_extremal_at_resonance() {
        let (mol, mut drive, _) = organic();
        let im_at = |d: &DriveParams| {
            let x = chi3(&mol, d, 1e18, Branch::AntiStokes).unwrap().value;
            (x / electronic_prefactor(&mol, d, 1e18, Branch::AntiStokes).unwrap()).im.abs()
        };
        let on = im_at(&drive);
        for det in [-2e-3, -5e-4, 5e-4, 2e-3] {
            drive.omega_ir = (mol.omega_v - det) / 2.0;
            assert!(im_at(&drive) < on);
        }
    }

    #[test]
    fn cross_section_vanishes_without_coupling() {
        let (mut mol, drive, _) = organic();
        mol.g = 0.0;
        assert_eq!(stokes_cross_section(&mol, &drive).unwrap(), 0.0);
    }

    #[test]
    fn cross_section_independent_of_probe_strength() {
        let (mol, mut drive, _) = organic();
        let a = stokes_cross_section(&mol, &drive).unwrap();
        let qa = stokes_cross_section_quadrature(&mol, &drive, 0.0).unwrap().sigma;
        drive.rabi_vis *= 7.0;
        assert_eq!(stokes_cross_section(&mol, &drive).unwrap(), a);
        assert_relative_eq!(
            stokes_cross_section_quadrature(&mol, &drive, 0.0).unwrap().sigma,
            qa,
            max_relative = 1e-9
        );
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let (mol, drive, _) = organic();
        let closed = stokes_cross_section(&mol, &drive).unwrap();
        let q = stokes_cross_section_quadrature(&mol, &drive, 0.0).unwrap();
        assert!(((q.sigma - closed) / closed).abs() < 1e-2);
    }

    #[test]
    fn round_trip_through_cross_section() {
        let (mol, drive, _) = organic();
        let sigma = stokes_cross_section(&mol, &drive).unwrap();
        let back = chi3_from_cross_section(&mol, &drive, 1e18, sigma).unwrap().value;
        let direct = chi3_resonant_part(&mol, &drive, 1e18, Branch::Stokes).unwrap().value;
        assert!((back - direct).norm() <= 1e-9 * direct.norm());
    }

    #[test]
    fn zero_cross_section_gives_zero() {
        let (mol, drive, _) = organic();
        assert_eq!(chi3_from_cross_section(&mol, &drive, 1e18, 0.0).unwrap().value.norm(), 0.0);
        assert!(chi3_from_cross_section(&mol, &drive, 1e18, -1.0).is_err());
    }

    #[test]
    fn inferred_chi3_half_power_at_linewidth() {
        let (mol, mut drive, _) = organic();
        let on = chi3_from_cross_section(&mol, &drive, 1e18, 1.0).unwrap().value.norm();
        let pump_on = mol.omega0.powi(2) - drive.omega_ir.powi(2);
        drive.omega_ir = (mol.omega_v - mol.gamma_v) / 2.0;
        let pump_off = mol.omega0.powi(2) - drive.omega_ir.powi(2);
        let off = chi3_from_cross_section(&mol, &drive, 1e18, 1.0).unwrap().value.norm();
        assert_relative_eq!(off * pump_off / (on * pump_on), 1.0 / 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn esu_conversion() {
        let v = Chi3Value {
            value: Complex64::new(1.0, 0.0),
            branch: Branch::Stokes,
        };
        assert_relative_eq!(v.to_esu().re, 1e-21 / 1.602_176_634e-12, max_relative = 1e-15);
    }
}
