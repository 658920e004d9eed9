//! Physical parameter types and regime diagnostics.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{PhysicsError, Result};

/// Two-level electronic system plus one vibrational mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoleculeParams {
    /// TLS transition energy ħω₀.
    #[serde(rename = "omega0_eV")]
    pub omega0: f64,
    /// Vibrational quantum ħω_v.
    #[serde(rename = "omega_v_eV")]
    pub omega_v: f64,
    /// TLS transverse relaxation rate ħγ⊥.
    #[serde(rename = "gamma_perp_eV")]
    pub gamma_perp: f64,
    /// Vibrational amplitude decay rate ħγ_v.
    #[serde(rename = "gamma_v_eV")]
    pub gamma_v: f64,
    /// Fröhlich electron-vibration coupling ħg.
    #[serde(rename = "g_eV")]
    pub g: f64,
    /// Transition dipole magnitude in e·nm.
    #[serde(rename = "d_eg_e_nm")]
    pub d_eg: f64,
}

impl MoleculeParams {
    /// Checks the structural invariants. The Fröhlich coupling may be zero
    /// (it switches the Raman channel off); everything else must be positive.
    pub fn check(&self) -> Result<()> {
        positive("omega0_eV", self.omega0)?;
        positive("omega_v_eV", self.omega_v)?;
        positive("gamma_perp_eV", self.gamma_perp)?;
        positive("gamma_v_eV", self.gamma_v)?;
        non_negative("g_eV", self.g)?;
        positive("d_eg_e_nm", self.d_eg)?;
        if self.gamma_v >= self.omega_v {
            return Err(PhysicsError::invalid(
                "gamma_v_eV",
                "vibration must be underdamped (gamma_v < omega_v)",
            ));
        }
        if self.gamma_perp >= self.omega0 {
            return Err(PhysicsError::invalid(
                "gamma_perp_eV",
                "gamma_perp must be below omega0",
            ));
        }
        Ok(())
    }

    /// Detuning `ω_v − 2ω_IR` of the parametric resonance.
    pub fn parametric_detuning(&self, drive: &DriveParams) -> f64 {
        self.omega_v - 2.0 * drive.omega_ir
    }
}

/// Visible probe and IR pump, both classical and linearly coupled to the TLS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveParams {
    #[serde(rename = "omega_vis_eV")]
    pub omega_vis: f64,
    /// Probe Rabi energy ħΩ_vis.
    #[serde(rename = "rabi_vis_eV")]
    pub rabi_vis: f64,
    #[serde(rename = "omega_ir_eV")]
    pub omega_ir: f64,
    /// Pump Rabi energy ħΩ_IR.
    #[serde(rename = "rabi_ir_eV")]
    pub rabi_ir: f64,
}

impl DriveParams {
    pub fn check(&self) -> Result<()> {
        non_negative("omega_vis_eV", self.omega_vis)?;
        non_negative("rabi_vis_eV", self.rabi_vis)?;
        non_negative("omega_ir_eV", self.omega_ir)?;
        non_negative("rabi_ir_eV", self.rabi_ir)?;
        if self.omega_vis <= self.omega_ir {
            return Err(PhysicsError::invalid(
                "omega_vis_eV",
                "probe frequency must exceed the IR pump frequency",
            ));
        }
        Ok(())
    }

    /// Coherent anti-Stokes frequency `ω_vis + 2ω_IR`.
    pub fn omega_anti_stokes(&self) -> f64 {
        self.omega_vis + 2.0 * self.omega_ir
    }

    /// Coherent Stokes frequency `ω_vis − 2ω_IR`.
    pub fn omega_stokes(&self) -> f64 {
        self.omega_vis - 2.0 * self.omega_ir
    }
}

/// Thermal bath of the vibrational mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    /// Bath temperature as an energy, kT.
    #[serde(rename = "kT_eV")]
    pub kt: f64,
}

impl Default for Environment {
    fn default() -> Self {
        Environment { kt: 0.025 }
    }
}

impl Environment {
    pub fn check(&self) -> Result<()> {
        positive("kT_eV", self.kt)
    }

    /// Thermal occupation of a mode with quantum `omega_v`.
    pub fn occupation(&self, omega_v: f64) -> Result<f64> {
        thermal_occupation(omega_v, self.kt)
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(PhysicsError::invalid(field, format!("must be positive, got {v}")))
    }
}

fn non_negative(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(PhysicsError::invalid(
            field,
            format!("must be non-negative, got {v}"),
        ))
    }
}

/// Bose-Einstein occupation `1/(exp(ω_v/kT) − 1)`.
pub fn thermal_occupation(omega_v: f64, kt: f64) -> Result<f64> {
    if !(omega_v > 0.0) || !(kt > 0.0) {
        return Err(PhysicsError::domain(format!(
            "thermal occupation needs omega_v > 0 and kT > 0 (got {omega_v}, {kt})"
        )));
    }
    Ok(1.0 / (omega_v / kt).exp_m1())
}

/// Perturbation parameter ε: the larger of the two drive strengths measured
/// against their detuning from the TLS.
pub fn perturbation_parameter(mol: &MoleculeParams, drive: &DriveParams) -> Result<f64> {
    let ratio = |rabi: f64, omega: f64, name: &str| -> Result<f64> {
        let detuning = (omega - mol.omega0).abs();
        if detuning == 0.0 {
            if rabi == 0.0 {
                return Ok(0.0);
            }
            return Err(PhysicsError::domain(format!(
                "{name} drive exactly resonant with the TLS"
            )));
        }
        Ok(rabi / detuning)
    };
    let vis = ratio(drive.rabi_vis, drive.omega_vis, "probe")?;
    let ir = ratio(drive.rabi_ir, drive.omega_ir, "IR")?;
    Ok(vis.max(ir))
}

/// Factors used to decide when a "much greater than" assumption holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// `|ω − ω₀| ≥ factor · γ⊥` for both drives.
    pub non_resonance: f64,
    /// `ω₀ ≥ factor · kT`.
    pub thermal: f64,
    /// `ε · factor ≤ 1`.
    pub perturbative: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            non_resonance: 10.0,
            thermal: 10.0,
            perturbative: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    InvalidParameter { field: &'static str, reason: String },
    ProbeResonant { detuning: f64 },
    PumpResonant { detuning: f64 },
    ThermalRegime { omega0: f64, kt: f64 },
    PerturbationBreakdown { epsilon: f64 },
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::InvalidParameter { .. } => "invalid_parameter",
            Warning::ProbeResonant { .. } => "probe_resonant",
            Warning::PumpResonant { .. } => "pump_resonant",
            Warning::ThermalRegime { .. } => "thermal_regime",
            Warning::PerturbationBreakdown { .. } => "perturbation_breakdown",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::InvalidParameter { field, reason } => write!(f, "{field}: {reason}"),
            Warning::ProbeResonant { detuning } => write!(
                f,
                "probe resonant with TLS: |ω_vis − ω₀| = {detuning:e} eV, |ω_vis − ω₀| ≫ γ⊥ violated"
            ),
            Warning::PumpResonant { detuning } => write!(
                f,
                "IR pump resonant with TLS: |ω_IR − ω₀| = {detuning:e} eV, |ω_IR − ω₀| ≫ γ⊥ violated"
            ),
            Warning::ThermalRegime { omega0, kt } => {
                write!(f, "ħω₀ ≫ kT violated (ω₀ = {omega0:e} eV, kT = {kt:e} eV)")
            }
            Warning::PerturbationBreakdown { epsilon } => {
                write!(f, "perturbation theory breakdown: ε = {epsilon:e}, ε ≪ 1 violated")
            }
        }
    }
}

impl Serialize for Warning {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Warning", 2)?;
        st.serialize_field("code", self.code())?;
        st.serialize_field("message", &self.to_string())?;
        st.end()
    }
}

/// Outcome of [`validate_params`]. `valid` is true iff there are no warnings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub epsilon: f64,
    pub warnings: Vec<Warning>,
    pub valid: bool,
}

impl Diagnostics {
    pub fn has(&self, code: &str) -> bool {
        self.warnings.iter().any(|w| w.code() == code)
    }
}

/// Checks every regime assumption of the perturbative model. Never fails;
/// violations are reported as warnings so sweeps can cross the validity
/// boundary.
pub fn validate_params(
    mol: &MoleculeParams,
    drive: &DriveParams,
    env: &Environment,
    thresholds: &Thresholds,
) -> Diagnostics {
    let mut warnings = Vec::new();
    for r in [mol.check(), drive.check(), env.check()] {
        if let Err(PhysicsError::InvalidParameter { field, reason }) = r {
            warnings.push(Warning::InvalidParameter { field, reason });
        }
    }

    let probe_detuning = (drive.omega_vis - mol.omega0).abs();
    if probe_detuning < thresholds.non_resonance * mol.gamma_perp {
        warnings.push(Warning::ProbeResonant {
            detuning: probe_detuning,
        });
    }
    let pump_detuning = (drive.omega_ir - mol.omega0).abs();
    if pump_detuning < thresholds.non_resonance * mol.gamma_perp {
        warnings.push(Warning::PumpResonant {
            detuning: pump_detuning,
        });
    }
    if mol.omega0 < thresholds.thermal * env.kt {
        warnings.push(Warning::ThermalRegime {
            omega0: mol.omega0,
            kt: env.kt,
        });
    }

    let epsilon = perturbation_parameter(mol, drive).unwrap_or(f64::INFINITY);
    if !(epsilon * thresholds.perturbative <= 1.0) {
        warnings.push(Warning::PerturbationBreakdown { epsilon });
    }

    Diagnostics {
        epsilon,
        valid: warnings.is_empty(),
        warnings,
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::organic;
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn thermal_occupation_values() {
        // 1/(e^5 - 1), evaluated independently via e^-5/(1 - e^-5)
        let x = (-5.0f64).exp();
        assert_relative_eq!(
            thermal_occupation(0.1, 0.02).unwrap(),
            x / (1.0 - x),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            thermal_occupation(0.1, 0.02).unwrap(),
            6.783_654_4e-3,
            max_relative = 1e-7
        );
        assert_relative_eq!(
            thermal_occupation(0.1, 0.1).unwrap(),
            1.0 / (std::f64::consts::E - 1.0),
            max_relative = 1e-14
        );
        assert_eq!(thermal_occupation(0.1, 1e-6).unwrap(), 0.0);
    }

    #[test]
    fn thermal_occupation_rejects_bad_inputs() {
        assert!(thermal_occupation(0.0, 0.02).is_err());
        assert!(thermal_occupation(0.1, 0.0).is_err());
        assert!(thermal_occupation(-0.1, 0.02).is_err());
    }

    #[test]
    fn epsilon_examples() {
        let (mut mol, mut drive, _) = organic();
        drive.rabi_vis = 0.0;
        assert_relative_eq!(
            perturbation_parameter(&mol, &drive).unwrap(),
            0.01 / 2.95,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            perturbation_parameter(&mol, &drive).unwrap(),
            3.390e-3,
            max_relative = 1e-3
        );

        drive.rabi_ir = 0.0;
        assert_eq!(perturbation_parameter(&mol, &drive).unwrap(), 0.0);

        // symmetric: both ratios 0.05
        mol.omega0 = 3.0;
        drive.omega_vis = 2.0;
        drive.rabi_vis = 0.05;
        drive.omega_ir = 1.0;
        drive.rabi_ir = 0.1;
        assert_relative_eq!(
            perturbation_parameter(&mol, &drive).unwrap(),
            0.05,
            max_relative = 1e-15
        );
    }

    #[test]
    fn epsilon_exact_resonance_is_domain_error() {
        let (mol, mut drive, _) = organic();
        drive.omega_vis = mol.omega0;
        assert!(matches!(
            perturbation_parameter(&mol, &drive),
            Err(PhysicsError::Domain(_))
        ));
    }

    #[test]
    fn organic_parameters_are_valid() {
        let (mol, drive, env) = organic();
        let d = validate_params(&mol, &drive, &env, &Thresholds::default());
        assert!(d.valid, "{:?}", d.warnings);
        assert!(d.warnings.is_empty());
    }

    #[test]
    fn resonant_probe_warns() {
        let (mol, mut drive, env) = organic();
        drive.omega_vis = mol.omega0;
        let d = validate_params(&mol, &drive, &env, &Thresholds::default());
        assert!(!d.valid);
        assert!(d.has("probe_resonant"));
        assert!(d
            .warnings
            .iter()
            .any(|w| w.to_string().contains("probe resonant with TLS")));
        assert!(d.epsilon.is_infinite());
    }

    #[test]
    fn hot_bath_warns() {
        let (mol, drive, mut env) = organic();
        env.kt = mol.omega0;
        let d = validate_params(&mol, &drive, &env, &Thresholds::default());
        assert!(d.has("thermal_regime"));
        assert!(d
            .warnings
            .iter()
            .any(|w| w.to_string().contains("ħω₀ ≫ kT violated")));
    }

    #[test]
    fn strong_drive_warns() {
        let (mol, mut drive, env) = organic();
        drive.rabi_ir = 0.5 * (mol.omega0 - drive.omega_ir);
        let d = validate_params(&mol, &drive, &env, &Thresholds::default());
        assert!(d.has("perturbation_breakdown"));
        assert_relative_eq!(d.epsilon, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn invalid_fields_are_reported_not_thrown() {
        let (mut mol, drive, env) = organic();
        mol.gamma_v = -1.0;
        let d = validate_params(&mol, &drive, &env, &Thresholds::default());
        assert!(d.has("invalid_parameter"));
        assert!(matches!(
            mol.check(),
            Err(PhysicsError::InvalidParameter { field: "gamma_v_eV", .. })
        ));
    }

    #[test]
    fn serde_keys_carry_units() {
        let (mol, drive, env) = organic();
        let json = serde_json::to_string(&(mol, drive, env)).unwrap();
        for key in ["omega0_eV", "gamma_v_eV", "d_eg_e_nm", "rabi_ir_eV", "kT_eV"] {
            assert!(json.contains(key), "{key} missing from {json}");
        }
        let bad = r#"{"omega0_eV":3,"omega_v_eV":0.1,"gamma_perp_eV":0.01,"gamma_v_eV":0.001,"g_eV":0.01,"d_eg_e_nm":0.1,"extra":1}"#;
        assert!(serde_json::from_str::<MoleculeParams>(bad).is_err());
    }

    proptest! {
        #[test]
        fn occupation_monotone(w in 0.01f64..1.0, kt in 0.005f64..0.5, dw in 1e-4f64..0.1, dk in 1e-4f64..0.1) {
            let n = thermal_occupation(w, kt).unwrap();
            prop_assert!(thermal_occupation(w + dw, kt).unwrap() < n);
            prop_assert!(thermal_occupation(w, kt + dk).unwrap() > n);
        }

        #[test]
        fn detailed_balance_identity(w in 0.01f64..1.0, kt in 0.001f64..1.0) {
            let n = thermal_occupation(w, kt).unwrap();
            let lhs = n / (1.0 + n);
            let rhs = (-w / kt).exp();
            prop_assert!(((lhs - rhs) / rhs).abs() <= 1e-12);
        }

        #[test]
        fn epsilon_symmetric_under_drive_exchange(
            w0 in 2.0f64..4.0, wa in 0.01f64..1.5, wb in 0.01f64..1.5,
            ra in 0.0f64..0.1, rb in 0.0f64..0.1,
        ) {
            let (mut mol, _, _) = organic();
            mol.omega0 = w0;
            let d1 = DriveParams { omega_vis: wa, rabi_vis: ra, omega_ir: wb, rabi_ir: rb };
            let d2 = DriveParams { omega_vis: wb, rabi_vis: rb, omega_ir: wa, rabi_ir: ra };
            prop_assert_eq!(
                perturbation_parameter(&mol, &d1).unwrap(),
                perturbation_parameter(&mol, &d2).unwrap()
            );
        }
    }
}
