//! Phase matching and the collective enhancement of the coherent anti-Stokes
//! line over spontaneous scattering.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{PhysicsError, Result};
use crate::model::DriveParams;
use crate::units::{HBAR_C_EV_NM, MM3_IN_CM3, NM_IN_M};

/// Refractive indices at the three beam frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DispersionData {
    Full { n_vis: f64, n_ir: f64, n_ast: f64 },
    /// Index excess of the anti-Stokes leg over an otherwise dispersionless
    /// medium.
    ConstantDelta { delta_n: f64 },
}

impl DispersionData {
    pub fn check(&self) -> Result<()> {
        let ok = |n: f64| n.is_finite() && n >= 1.0 - 1e-3;
        match *self {
            DispersionData::Full { n_vis, n_ir, n_ast } => {
                if !(ok(n_vis) && ok(n_ir) && ok(n_ast)) {
                    return Err(PhysicsError::invalid("dispersion", "indices must be finite and >= 0.999"));
                }
            }
            DispersionData::ConstantDelta { delta_n } => {
                if !delta_n.is_finite() || !ok(1.0 + delta_n) {
                    return Err(PhysicsError::invalid("dispersion", "delta_n must be finite and >= -1e-3"));
                }
            }
        }
        Ok(())
    }
}

/// Angular wavenumber in nm⁻¹.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Wavenumber(pub f64);

impl Wavenumber {
    pub fn from_per_m(k: f64) -> Self {
        Wavenumber(k * NM_IN_M)
    }

    pub fn per_nm(self) -> f64 {
        self.0
    }

    pub fn per_m(self) -> f64 {
        self.0 / NM_IN_M
    }
}

/// Collinear mismatch `[n_aSt ω_aSt − n_vis ω_vis − 2 n_IR ω_IR] / ħc`.
pub fn wavevector_mismatch(disp: &DispersionData, drive: &DriveParams) -> Result<Wavenumber> {
    disp.check()?;
    // ω_aSt = ω_vis + 2ω_IR substituted so equal indices give exactly zero
    let dk = match *disp {
        DispersionData::Full { n_vis, n_ir, n_ast } => {
            (n_ast - n_vis) * drive.omega_vis + 2.0 * (n_ast - n_ir) * drive.omega_ir
        }
        DispersionData::ConstantDelta { delta_n } => delta_n * drive.omega_anti_stokes(),
    };
    Ok(Wavenumber(dk / HBAR_C_EV_NM))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "meters", rename_all = "snake_case")]
pub enum CoherenceLength {
    Finite(f64),
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceEstimate {
    pub length: CoherenceLength,
    /// Set when a negative mismatch was folded to its magnitude.
    pub negative_mismatch: bool,
}

/// `L_c = 2π/|Δk|` in metres.
pub fn coherence_length(delta_k: Wavenumber) -> CoherenceEstimate {
    let dk = delta_k.per_m();
    let length = if dk == 0.0 {
        CoherenceLength::Unbounded
    } else {
        CoherenceLength::Finite(2.0 * PI / dk.abs())
    };
    CoherenceEstimate {
        length,
        negative_mismatch: dk < 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleParams {
    pub concentration_cm3: f64,
    #[serde(default)]
    pub volume_mm3: Option<f64>,
    #[serde(default)]
    pub molecules: Option<f64>,
}

impl EnsembleParams {
    /// Number of molecules in the coherence volume.
    pub fn molecule_count(&self) -> Result<f64> {
        if !(self.concentration_cm3 > 0.0) || !self.concentration_cm3.is_finite() {
            return Err(PhysicsError::invalid("concentration_cm3", "must be positive"));
        }
        let from_volume = match self.volume_mm3 {
            Some(v) if v > 0.0 && v.is_finite() => Some(self.concentration_cm3 * v * MM3_IN_CM3),
            Some(_) => return Err(PhysicsError::invalid("volume_mm3", "must be positive")),
            None => None,
        };
        match (self.molecules, from_volume) {
            (Some(n), _) if !(n > 0.0) || !n.is_finite() => {
                Err(PhysicsError::invalid("molecules", "must be positive"))
            }
            (Some(n), Some(v)) => {
                if ((n - v) / v).abs() > 0.01 {
                    Err(PhysicsError::invalid(
                        "molecules",
                        format!("{n:e} disagrees with concentration x volume = {v:e}"),
                    ))
                } else {
                    Ok(n)
                }
            }
            (Some(n), None) => Ok(n),
            (None, Some(v)) => Ok(v),
            (None, None) => Err(PhysicsError::invalid(
                "volume_mm3",
                "either volume_mm3 or molecules is required",
            )),
        }
    }
}

/// `F = N n_coh / n_incoh`.
pub fn enhancement_factor(ens: &EnsembleParams, n_coh: f64, n_incoh: f64) -> Result<f64> {
    let n = ens.molecule_count()?;
    if n < 1.0 {
        return Err(PhysicsError::domain("fewer than one molecule"));
    }
    if !(n_incoh > 0.0) {
        return Err(PhysicsError::domain(
            "spontaneous occupation is zero; the comparison is undefined",
        ));
    }
    if !(n_coh >= 0.0) {
        return Err(PhysicsError::domain("coherent occupation must be non-negative"));
    }
    Ok(n * n_coh / n_incoh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn drive(omega_vis: f64, omega_ir: f64) -> DriveParams {
        DriveParams {
            omega_vis,
            rabi_vis: 0.0,
            omega_ir,
            rabi_ir: 0.0,
        }
    }

    fn count(n: f64) -> EnsembleParams {
        EnsembleParams {
            concentration_cm3: 1e19,
            volume_mm3: None,
            molecules: Some(n),
        }
    }

    #[test]
    fn equal_indices_phase_match() {
        let d = DispersionData::Full { n_vis: 1.0003, n_ir: 1.0003, n_ast: 1.0003 };
        let dk = wavevector_mismatch(&d, &drive(2.33, 0.145)).unwrap();
        assert_eq!(dk.per_nm(), 0.0);
    }

    #[test]
    fn shorthand_definition() {
        let dr = drive(2.33, 0.145);
        let dk = wavevector_mismatch(&DispersionData::ConstantDelta { delta_n: 1e-5 }, &dr).unwrap();
        assert_relative_eq!(dk.per_nm(), 1e-5 * dr.omega_anti_stokes() / HBAR_C_EV_NM, max_relative = 1e-15);
    }

    #[test]
    fn nitrogen_scale() {
        let dk = wavevector_mismatch(&DispersionData::ConstantDelta { delta_n: 1e-5 }, &drive(2.33, 0.145))
            .unwrap();
        match coherence_length(dk).length {
            CoherenceLength::Finite(l) => assert!((1e-3..=1e-1).contains(&l), "{l}"),
            CoherenceLength::Unbounded => panic!(),
        }
    }

    #[test]
    fn coherence_length_cases() {
        let est = coherence_length(Wavenumber::from_per_m(2.0 * PI * 1e3));
        match est.length {
            CoherenceLength::Finite(l) => assert_relative_eq!(l, 1e-3, max_relative = 1e-12),
            CoherenceLength::Unbounded => panic!(),
        }
        assert!(!est.negative_mismatch);
        assert_eq!(coherence_length(Wavenumber(0.0)).length, CoherenceLength::Unbounded);
        let neg = coherence_length(Wavenumber::from_per_m(-2.0 * PI * 1e3));
        assert!(neg.negative_mismatch);
        assert_eq!(neg.length, est.length);
    }

    #[test]
    fn bad_dispersion_rejected() {
        let d = DispersionData::Full { n_vis: 0.5, n_ir: 1.0, n_ast: 1.0 };
        assert!(wavevector_mismatch(&d, &drive(2.0, 0.1)).is_err());
    }

    #[test]
    fn molecule_count_sources() {
        let e = EnsembleParams { concentration_cm3: 1e19, volume_mm3: Some(1.0), molecules: None };
        assert_relative_eq!(e.molecule_count().unwrap(), 1e16, max_relative = 1e-15);
        let ok = EnsembleParams { molecules: Some(1.005e16), ..e };
        assert_eq!(ok.molecule_count().unwrap(), 1.005e16);
        let bad = EnsembleParams { molecules: Some(1.05e16), ..e };
        assert!(bad.molecule_count().is_err());
        let none = EnsembleParams { volume_mm3: None, molecules: None, ..e };
        assert!(none.molecule_count().is_err());
    }

    #[test]
    fn enhancement_examples() {
        let f = enhancement_factor(&count(1e16), 1.13e-7, 1.0).unwrap();
        assert_relative_eq!(f, 1.13e9, max_relative = 1e-12);
        assert_eq!(enhancement_factor(&count(1e16), 0.0, 1.0).unwrap(), 0.0);
        assert!(enhancement_factor(&count(1e16), 1.0, 0.0).is_err());
        assert!(enhancement_factor(&count(0.5), 1.0, 1.0).is_err());
        assert!(enhancement_factor(&count(1.0), 6.25, 1e-3).unwrap() > 1.0);
    }

    proptest! {
        #[test]
        fn enhancement_scaling(n in 1.0f64..1e20, c in 0.0f64..10.0, i in 1e-9f64..10.0, k in 1.0f64..1e3) {
            let f = enhancement_factor(&count(n), c, i).unwrap();
            let tol = |x: f64| 1e-12 * x.abs().max(1e-300);
            prop_assert!((enhancement_factor(&count(k * n), c, i).unwrap() - k * f).abs() <= tol(k * f));
            prop_assert!((enhancement_factor(&count(n), k * c, i).unwrap() - k * f).abs() <= tol(k * f));
            prop_assert!((enhancement_factor(&count(n), c, k * i).unwrap() - f / k).abs() <= tol(f / k));
        }

        #[test]
        fn dispersionless_always_unbounded(wvis in 0.5f64..5.0, wir in 0.01f64..0.5) {
            let d = DispersionData::Full { n_vis: 1.0, n_ir: 1.0, n_ast: 1.0 };
            let dk = wavevector_mismatch(&d, &drive(wvis, wir)).unwrap();
            prop_assert_eq!(coherence_length(dk).length, CoherenceLength::Unbounded);
        }
    }
}
