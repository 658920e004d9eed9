//! Spontaneous emission: Rayleigh lines of both drives and their thermal
//! Stokes/anti-Stokes Raman sidebands.

use super::lines::{DeltaLine, LineLabel, LorentzLine, SpectrumModel};
use crate::error::{PhysicsError, Result};
use crate::model::{thermal_occupation, DriveParams, Environment, MoleculeParams};

fn nonzero(x: f64, what: &str) -> Result<f64> {
    if x == 0.0 {
        Err(PhysicsError::domain(format!("{what} vanishes")))
    } else {
        Ok(x)
    }
}

/// Rayleigh delta plus Stokes/anti-Stokes Lorentzians produced by one drive.
fn drive_lines(
    mol: &MoleculeParams,
    omega: f64,
    rabi: f64,
    n_bar: f64,
    labels: [LineLabel; 3],
    model: &mut SpectrumModel,
) -> Result<()> {
    let [rayleigh, stokes, anti_stokes] = labels;
    let response = rabi / nonzero(omega - mol.omega0, "drive detuning from the TLS")?;
    let base = 0.25 * response * response;
    model.delta_lines.push(DeltaLine {
        label: rayleigh,
        center: omega,
        weight: omega.powi(4) * base,
    });

    let g2 = mol.g * mol.g;
    let w_st = omega - mol.omega_v;
    let w_ast = omega + mol.omega_v;
    let st_detuning = nonzero(mol.omega0 - omega + mol.omega_v, "Stokes detuning from the TLS")?;
    let ast_detuning = nonzero(mol.omega0 - omega - mol.omega_v, "anti-Stokes detuning from the TLS")?;
    model.lorentz_lines.push(LorentzLine {
        label: stokes,
        center: w_st,
        weight: base * w_st.powi(4) * g2 / (st_detuning * st_detuning) * (1.0 + n_bar),
        gamma: mol.gamma_v,
    });
    model.lorentz_lines.push(LorentzLine {
        label: anti_stokes,
        center: w_ast,
        weight: base * w_ast.powi(4) * g2 / (ast_detuning * ast_detuning) * n_bar,
        gamma: mol.gamma_v,
    });
    Ok(())
}

/// Incoherent spectrum with an explicit thermal occupation of the vibration.
pub fn incoherent_spectrum_with_occupation(
    mol: &MoleculeParams,
    drive: &DriveParams,
    n_bar: f64,
) -> Result<SpectrumModel> {
    let mut model = SpectrumModel::default();
    drive_lines(
        mol,
        drive.omega_vis,
        drive.rabi_vis,
        n_bar,
        [LineLabel::RayleighVis, LineLabel::StokesVis, LineLabel::AntistokesVis],
        &mut model,
    )?;
    drive_lines(
        mol,
        drive.omega_ir,
        drive.rabi_ir,
        n_bar,
        [LineLabel::RayleighIr, LineLabel::StokesIr, LineLabel::AntistokesIr],
        &mut model,
    )?;
    // order: the two Rayleigh deltas, then vis Stokes/anti-Stokes, IR Stokes/anti-Stokes
    Ok(model)
}

/// Rayleigh scattering of both drives plus the four thermal Raman sidebands at
/// `ω_vis ∓ ω_v` and `ω_IR ∓ ω_v`. Stokes lines carry `1 + n̄_v`, anti-Stokes
/// lines carry `n̄_v`.
pub fn incoherent_spectrum(
    mol: &MoleculeParams,
    drive: &DriveParams,
    env: &Environment,
) -> Result<SpectrumModel> {
    let n_bar = thermal_occupation(mol.omega_v, env.kt)?;
    incoherent_spectrum_with_occupation(mol, drive, n_bar)
}

/// Intensity ratio of incoherent anti-Stokes to Stokes lines, `exp(−ω_v/kT)`.
pub fn incoherent_stokes_antistokes_ratio(env: &Environment, mol: &MoleculeParams) -> Result<f64> {
    if !(env.kt > 0.0) {
        return Err(PhysicsError::domain("kT must be positive"));
    }
    Ok((-mol.omega_v / env.kt).exp())
}
