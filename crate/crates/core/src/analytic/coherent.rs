//! Coherent vibration driven at 2ω_IR and the coherent Stokes/anti-Stokes lines
//! it produces.

use num_complex::Complex64;
use serde::Serialize;

use super::lines::{DeltaLine, LineLabel, SpectrumModel};
use crate::error::{PhysicsError, Result};
use crate::model::{DriveParams, MoleculeParams};

/// Stokes (`ω_vis − 2ω_IR`) or anti-Stokes (`ω_vis + 2ω_IR`) branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Stokes,
    AntiStokes,
}

impl Branch {
    pub fn frequency(&self, drive: &DriveParams) -> f64 {
        match self {
            Branch::Stokes => drive.omega_stokes(),
            Branch::AntiStokes => drive.omega_anti_stokes(),
        }
    }

    /// Sign of γ_v in the resonant denominator `(ω_v − 2ω_IR) ∓ iγ_v`.
    fn damping_sign(&self) -> f64 {
        match self {
            Branch::AntiStokes => -1.0,
            Branch::Stokes => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherentAmplitude {
    /// Complex amplitude multiplying `e^{−i2ω_IR t}`.
    pub amplitude: Complex64,
    /// Oscillation frequency 2ω_IR.
    pub frequency: f64,
}

pub(crate) fn pump_factor(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    let denom = mol.omega0 * mol.omega0 - drive.omega_ir * drive.omega_ir;
    if denom == 0.0 {
        return Err(PhysicsError::domain("omega_ir equals omega0"));
    }
    Ok(drive.rabi_ir * drive.rabi_ir / denom)
}

/// Steady coherent vibrational amplitude
/// `b_coh = (g/4) / ((ω_v − 2ω_IR) − iγ_v) · Ω_IR² / (ω₀² − ω_IR²)`.
pub fn coherent_vibration_amplitude(
    mol: &MoleculeParams,
    drive: &DriveParams,
) -> Result<CoherentAmplitude> {
    let x = pump_factor(mol, drive)?;
    let denom = Complex64::new(mol.parametric_detuning(drive), -mol.gamma_v);
    Ok(CoherentAmplitude {
        amplitude: 0.25 * mol.g * x / denom,
        frequency: 2.0 * drive.omega_ir,
    })
}

/// `|b_coh|²` without the `ω_IR ≪ ω₀` simplification.
pub fn coherent_quanta_exact(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    Ok(coherent_vibration_amplitude(mol, drive)?.amplitude.norm_sqr())
}

/// Resonant closed form `(1/16)(Ω_IR/ω₀)⁴(g/γ_v)²`, valid at `2ω_IR = ω_v` with
/// `ω_IR ≪ ω₀`.
pub fn coherent_quanta_resonant(mol: &MoleculeParams, drive: &DriveParams) -> f64 {
    let r = drive.rabi_ir / mol.omega0;
    let q = mol.g / mol.gamma_v;
    r * r * r * r * q * q / 16.0
}

/// Number of coherent vibrational quanta. Uses the resonant closed form when
/// `2ω_IR = ω_v` (to 1e-12 relative) and `|b_coh|²` otherwise.
pub fn coherent_quanta(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    if mol.parametric_detuning(drive).abs() <= 1e-12 * mol.omega_v {
        Ok(coherent_quanta_resonant(mol, drive))
    } else {
        coherent_quanta_exact(mol, drive)
    }
}

/// `1 + g² / [8(ω_vis − ω₀)((ω_v − 2ω_IR) ∓ iγ_v)]`: resonant Raman term
/// relative to the electronic background, `−iγ_v` for anti-Stokes and `+iγ_v`
/// for Stokes.
pub fn coherent_bracket(mol: &MoleculeParams, drive: &DriveParams, branch: Branch) -> Result<Complex64> {
    let probe = drive.omega_vis - mol.omega0;
    if probe == 0.0 {
        return Err(PhysicsError::domain("probe exactly resonant with the TLS"));
    }
    let denom = Complex64::new(
        mol.parametric_detuning(drive),
        branch.damping_sign() * mol.gamma_v,
    ) * (8.0 * probe);
    Ok(1.0 + mol.g * mol.g / denom)
}

/// Magnitude of the resonant term against the non-resonant background.
pub fn resonant_to_background_ratio(
    mol: &MoleculeParams,
    drive: &DriveParams,
    branch: Branch,
) -> Result<f64> {
    Ok((coherent_bracket(mol, drive, branch)? - 1.0).norm())
}

fn check_branch_frequencies(mol: &MoleculeParams, drive: &DriveParams) -> Result<()> {
    if drive.omega_stokes() == 0.0 {
        return Err(PhysicsError::domain(
            "omega_vis = 2 omega_ir puts the coherent Stokes line at zero frequency",
        ));
    }
    for b in [Branch::Stokes, Branch::AntiStokes] {
        if b.frequency(drive) == mol.omega0 {
            return Err(PhysicsError::domain(format!(
                "coherent {b:?} line resonant with the TLS"
            )));
        }
    }
    Ok(())
}

/// Third-order TLS amplitude at the coherent line of `branch`, i.e. the
/// coefficient of `e^{−iω_± t}` in σ₃.
pub fn third_order_amplitude(
    mol: &MoleculeParams,
    drive: &DriveParams,
    branch: Branch,
) -> Result<Complex64> {
    check_branch_frequencies(mol, drive)?;
    let common = drive.rabi_vis * pump_factor(mol, drive)?;
    let bracket = coherent_bracket(mol, drive, branch)?;
    Ok(common * bracket / (branch.frequency(drive) - mol.omega0))
}

/// Coherent Stokes and anti-Stokes delta lines at `ω_vis ∓ 2ω_IR`.
pub fn coherent_sideband_weights(
    mol: &MoleculeParams,
    drive: &DriveParams,
) -> Result<SpectrumModel> {
    let mut model = SpectrumModel::default();
    for (branch, label) in [
        (Branch::AntiStokes, LineLabel::CoherentAntistokes),
        (Branch::Stokes, LineLabel::CoherentStokes),
    ] {
        let w = branch.frequency(drive);
        let amp = third_order_amplitude(mol, drive, branch)?;
        model.delta_lines.push(DeltaLine {
            label,
            center: w,
            weight: w.powi(4) * amp.norm_sqr(),
        });
    }
    Ok(model)
}

/// `I_St / I_aSt` from the coherent amplitudes alone,
/// `((ω_aSt − ω₀)/(ω_St − ω₀))²`. No temperature enters.
pub fn coherent_stokes_antistokes_ratio(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    let st = third_order_amplitude(mol, drive, Branch::Stokes)?;
    let ast = third_order_amplitude(mol, drive, Branch::AntiStokes)?;
    if ast.norm_sqr() == 0.0 {
        // Amplitudes vanish together (no probe or no pump); the ratio of the
        // frequency factors is still defined.
        let r = (drive.omega_anti_stokes() - mol.omega0) / (drive.omega_stokes() - mol.omega0);
        return Ok(r * r);
    }
    Ok(st.norm_sqr() / ast.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::response::{effective_force_components, ForceLabel};
    use crate::model::fixtures::organic;
    use crate::model::thermal_occupation;
    use approx::assert_relative_eq;

    fn nitrogen() -> (MoleculeParams, DriveParams) {
        (
            MoleculeParams {
                omega0: 3.0,
                omega_v: 0.1,
                gamma_perp: 0.01,
                gamma_v: 5e-5,
                g: 0.05,
                d_eg: 0.1,
            },
            DriveParams {
                omega_vis: 2.0,
                rabi_vis: 0.01,
                omega_ir: 0.05,
                rabi_ir: 0.01,
            },
        )
    }

    #[test]
    fn resonant_amplitude_value() {
        let (mol, drive, _) = organic();
        let b = coherent_vibration_amplitude(&mol, &drive).unwrap();
        let expected = 0.25 * (0.01 / 1e-3) * 1e-4 / (9.0 - 0.0025);
        assert_relative_eq!(b.amplitude.norm(), expected, max_relative = 1e-14);
        assert_relative_eq!(b.amplitude.norm(), 2.7785e-5, max_relative = 1e-4);
        // at resonance the amplitude is +i times a positive number
        assert!(b.amplitude.re.abs() < 1e-20 && b.amplitude.im > 0.0);
        assert_eq!(b.frequency, 0.1);
    }

    #[test]
    fn no_coupling_no_amplitude() {
        let (mut mol, drive, _) = organic();
        mol.g = 0.0;
        assert_eq!(coherent_vibration_amplitude(&mol, &drive).unwrap().amplitude.norm(), 0.0);
    }

    #[test]
    fn half_power_at_one_linewidth() {
        let (mol, mut drive, _) = organic();
        let norm = |d: &DriveParams| {
            coherent_vibration_amplitude(&mol, d).unwrap().amplitude.norm()
                / pump_factor(&mol, d).unwrap()
        };
        let on = norm(&drive);
        drive.omega_ir = (mol.omega_v - mol.gamma_v) / 2.0;
        assert_relative_eq!(norm(&drive) / on, 1.0 / 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn amplitude_solves_driven_oscillator() {
        // b = F / (i(ω_v − 2ω_IR) + γ_v) with F the 2ω_IR force harmonic
        let (mol, mut drive, _) = organic();
        drive.omega_ir = 0.0487;
        let f = effective_force_components(&mol, &drive).unwrap();
        let force = f.iter().find(|c| c.label == ForceLabel::TwicePump).unwrap().weight;
        let b = force / Complex64::new(mol.gamma_v, mol.parametric_detuning(&drive));
        let direct = coherent_vibration_amplitude(&mol, &drive).unwrap().amplitude;
        assert!((b - direct).norm() <= 1e-14 * direct.norm());
    }

    #[test]
    fn organic_quanta_and_ratio() {
        let (mol, drive, env) = organic();
        let n_coh = coherent_quanta(&mol, &drive).unwrap();
        assert_relative_eq!(n_coh, (0.01f64 / 3.0).powi(4) * 100.0 / 16.0, max_relative = 1e-14);
        assert_relative_eq!(n_coh, 7.716e-10, max_relative = 1e-3);
        let n_incoh = thermal_occupation(mol.omega_v, env.kt).unwrap();
        let ratio = n_coh / n_incoh;
        assert!(ratio > 1e-7 / 3.0 && ratio < 3e-7);
        // exact vs the general path: differ at O((ω_IR/ω₀)²)
        let exact = coherent_quanta_exact(&mol, &drive).unwrap();
        let rel = (exact - n_coh) / n_coh;
        let expected = (mol.omega0.powi(2) / (mol.omega0.powi(2) - drive.omega_ir.powi(2))).powi(2) - 1.0;
        assert_relative_eq!(rel, expected, max_relative = 1e-9);
    }

    #[test]
    fn quanta_fourth_power_in_pump() {
        let (mol, mut drive, _) = organic();
        let n1 = coherent_quanta(&mol, &drive).unwrap();
        drive.rabi_ir *= 2.0;
        assert_relative_eq!(coherent_quanta(&mol, &drive).unwrap() / n1, 16.0, max_relative = 1e-14);
    }

    #[test]
    fn off_resonance_uses_exact_path() {
        let (mol, mut drive, _) = organic();
        drive.omega_ir = 0.049;
        assert_eq!(
            coherent_quanta(&mol, &drive).unwrap(),
            coherent_quanta_exact(&mol, &drive).unwrap()
        );
    }

    #[test]
    fn bracket_without_coupling_is_one() {
        let (mut mol, drive, _) = organic();
        mol.g = 0.0;
        for b in [Branch::Stokes, Branch::AntiStokes] {
            assert_eq!(coherent_bracket(&mol, &drive, b).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn bracket_at_resonance_matches_reduced_form() {
        let (mol, drive) = nitrogen();
        let reduced = Complex64::new(1.0, 0.0)
            - Complex64::new(0.0, 1.0) / (8.0 * mol.gamma_v) * mol.g * mol.g
                / (mol.omega0 - drive.omega_vis);
        let b = coherent_bracket(&mol, &drive, Branch::AntiStokes).unwrap();
        assert!((b - reduced).norm() <= 1e-12 * reduced.norm());
    }

    #[test]
    fn bracket_equals_force_ratio() {
        // resonant/non-resonant driving terms of the σ₃ equation, plus one
        let (mol, mut drive) = nitrogen();
        drive.omega_ir = 0.0493;
        let common = drive.rabi_vis * drive.rabi_ir.powi(2)
            / (mol.omega0.powi(2) - drive.omega_ir.powi(2));
        for (branch, s) in [(Branch::AntiStokes, -1.0), (Branch::Stokes, 1.0)] {
            let resonant = Complex64::new(0.0, -1.0 / 8.0) * common * mol.g * mol.g
                / ((drive.omega_vis - mol.omega0)
                    * Complex64::new(mol.omega_v - 2.0 * drive.omega_ir, s * mol.gamma_v));
            let background = Complex64::new(0.0, -1.0) * common;
            let via_force = 1.0 + resonant / background;
            let b = coherent_bracket(&mol, &drive, branch).unwrap();
            assert!((b - via_force).norm() <= 1e-12 * b.norm());
        }
    }

    #[test]
    fn nitrogen_contrast() {
        let (mol, drive) = nitrogen();
        let r = resonant_to_background_ratio(&mol, &drive, Branch::AntiStokes).unwrap();
        assert_relative_eq!(r, 6.25, max_relative = 1e-12);
    }

    #[test]
    fn coherent_ratio_example() {
        let (mol, drive, _) = organic();
        let r = coherent_stokes_antistokes_ratio(&mol, &drive).unwrap();
        assert_relative_eq!(r, (0.9f64 / 1.1).powi(2), max_relative = 1e-13);
        assert_relative_eq!(r, 0.6694, max_relative = 1e-4);
    }

    #[test]
    fn sideband_weights_structure() {
        let (mol, drive, _) = organic();
        let m = coherent_sideband_weights(&mol, &drive).unwrap();
        assert_eq!(m.delta_lines.len(), 2);
        assert!(m.lorentz_lines.is_empty());
        let ast = m.delta(LineLabel::CoherentAntistokes).unwrap();
        let st = m.delta(LineLabel::CoherentStokes).unwrap();
        assert_eq!(ast.center, drive.omega_vis + 2.0 * drive.omega_ir);
        assert_eq!(st.center, drive.omega_vis - 2.0 * drive.omega_ir);
        // weight formula written out
        let common = drive.rabi_vis.powi(2) * drive.rabi_ir.powi(4)
            / (mol.omega0.powi(2) - drive.omega_ir.powi(2)).powi(2);
        let br = coherent_bracket(&mol, &drive, Branch::AntiStokes).unwrap().norm_sqr();
        let w = common * br * ast.center.powi(4) / (ast.center - mol.omega0).powi(2);
        assert_relative_eq!(ast.weight, w, max_relative = 1e-13);
        // weights differ from the amplitude ratio by the ω⁴ emission factor
        let r = coherent_stokes_antistokes_ratio(&mol, &drive).unwrap();
        assert_relative_eq!(
            st.weight / ast.weight,
            r * (st.center / ast.center).powi(4),
            max_relative = 1e-13
        );
    }

    #[test]
    fn pure_background_without_coupling() {
        let (mut mol, drive, _) = organic();
        mol.g = 0.0;
        let m = coherent_sideband_weights(&mol, &drive).unwrap();
        let ast = m.delta(LineLabel::CoherentAntistokes).unwrap();
        let common = drive.rabi_vis.powi(2) * drive.rabi_ir.powi(4)
            / (mol.omega0.powi(2) - drive.omega_ir.powi(2)).powi(2);
        assert_relative_eq!(
            ast.weight,
            common * ast.center.powi(4) / (ast.center - mol.omega0).powi(2),
            max_relative = 1e-14
        );
    }

    #[test]
    fn zero_frequency_stokes_rejected() {
        let (mol, mut drive, _) = organic();
        drive.omega_vis = 2.0 * drive.omega_ir;
        assert!(coherent_sideband_weights(&mol, &drive).is_err());
    }
}
