//! First-order TLS response and the second-order force on the vibration.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PhysicsError, Result};
use crate::model::{DriveParams, MoleculeParams};

/// First-order TLS coherence
///
/// `σ₁(t) = c_vis⁻ e^{−iω_vis t} + c_vis⁺ e^{iω_vis t} + c_ir⁻ e^{−iω_IR t} + c_ir⁺ e^{iω_IR t}`
///
/// with `c⁻ = Ω/2(ω − ω₀)` and `c⁺ = Ω/2(ω + ω₀)`. The γ⊥ shift of the
/// denominators is dropped, so the amplitudes are real-valued complex numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearResponse {
    pub c_vis_minus: Complex64,
    pub c_vis_plus: Complex64,
    pub c_ir_minus: Complex64,
    pub c_ir_plus: Complex64,
}

fn amplitude(rabi: f64, omega: f64, omega0: f64, sign: f64, which: &str) -> Result<Complex64> {
    if rabi == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let denom = 2.0 * (omega + sign * omega0);
    if denom == 0.0 {
        return Err(PhysicsError::domain(format!(
            "{which} drive exactly resonant with the TLS"
        )));
    }
    Ok(Complex64::new(rabi / denom, 0.0))
}

pub fn linear_response(mol: &MoleculeParams, drive: &DriveParams) -> Result<LinearResponse> {
    Ok(LinearResponse {
        c_vis_minus: amplitude(drive.rabi_vis, drive.omega_vis, mol.omega0, -1.0, "probe")?,
        c_vis_plus: amplitude(drive.rabi_vis, drive.omega_vis, mol.omega0, 1.0, "probe")?,
        c_ir_minus: amplitude(drive.rabi_ir, drive.omega_ir, mol.omega0, -1.0, "IR")?,
        c_ir_plus: amplitude(drive.rabi_ir, drive.omega_ir, mol.omega0, 1.0, "IR")?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ForceLabel {
    #[serde(rename = "2w_vis")]
    TwiceProbe,
    #[serde(rename = "w_vis-w_ir")]
    ProbeMinusPump,
    #[serde(rename = "w_vis+w_ir")]
    ProbePlusPump,
    #[serde(rename = "2w_ir")]
    TwicePump,
    #[serde(rename = "dc")]
    Dc,
}

impl ForceLabel {
    pub const ALL: [ForceLabel; 5] = [
        ForceLabel::TwiceProbe,
        ForceLabel::ProbeMinusPump,
        ForceLabel::ProbePlusPump,
        ForceLabel::TwicePump,
        ForceLabel::Dc,
    ];
}

impl fmt::Display for ForceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForceLabel::TwiceProbe => "2ω_vis",
            ForceLabel::ProbeMinusPump => "ω_vis−ω_IR",
            ForceLabel::ProbePlusPump => "ω_vis+ω_IR",
            ForceLabel::TwicePump => "2ω_IR",
            ForceLabel::Dc => "DC",
        })
    }
}

/// One harmonic of the effective force `−ig σ₁†σ₁` acting on `b`.
///
/// The force contains `weight · e^{−iνt}` and, because `σ₁†σ₁` is Hermitian,
/// a partner term `−ig·conj(S) e^{+iνt}` where `weight = −ig·S`. For the DC
/// component the two coincide and `weight` is the whole term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceComponent {
    pub label: ForceLabel,
    /// ν in eV.
    pub frequency: f64,
    pub weight: Complex64,
}

/// Expands `−ig σ₁†σ₁` into its five harmonics.
pub fn effective_force_components(
    mol: &MoleculeParams,
    drive: &DriveParams,
) -> Result<Vec<ForceComponent>> {
    let r = linear_response(mol, drive)?;
    Ok(force_from_response(&r, mol.g, drive))
}

/// Same expansion starting from an explicit first-order response.
pub fn force_from_response(
    r: &LinearResponse,
    g: f64,
    drive: &DriveParams,
) -> Vec<ForceComponent> {
    let (a, b, c, d) = (r.c_vis_minus, r.c_vis_plus, r.c_ir_minus, r.c_ir_plus);
    let minus_ig = Complex64::new(0.0, -g);
    // Coefficients of e^{−iνt} in σ₁†σ₁; σ₁† carries conj(c⁻) e^{+iωt} and
    // conj(c⁺) e^{−iωt}.
    let s = [
        (ForceLabel::TwiceProbe, 2.0 * drive.omega_vis, b.conj() * a),
        (
            ForceLabel::ProbeMinusPump,
            drive.omega_vis - drive.omega_ir,
            b.conj() * d + c.conj() * a,
        ),
        (
            ForceLabel::ProbePlusPump,
            drive.omega_vis + drive.omega_ir,
            b.conj() * c + d.conj() * a,
        ),
        (ForceLabel::TwicePump, 2.0 * drive.omega_ir, d.conj() * c),
        (
            ForceLabel::Dc,
            0.0,
            Complex64::from(a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr()),
        ),
    ];
    s.into_iter()
        .map(|(label, frequency, coeff)| ForceComponent {
            label,
            frequency,
            weight: minus_ig * coeff,
        })
        .collect()
}
