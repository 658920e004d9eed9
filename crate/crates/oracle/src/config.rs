use serde::{Deserialize, Serialize};

use ramanpump_core::MoleculeParams;

use crate::error::{invalid, Result};
use crate::integrator::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// TLS ground state times a thermal vibrational state.
    #[default]
    Thermal,
    /// TLS ground state times the vibrational vacuum.
    Vacuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// `cos²(πτ/2τ_max)`, the decaying half of a Hann window.
    #[default]
    HalfHann,
    Rectangular,
}

impl Window {
    pub fn weight(&self, tau: f64, tau_max: f64) -> f64 {
        match self {
            Window::HalfHann => {
                let c = (std::f64::consts::FRAC_PI_2 * tau / tau_max).cos();
                c * c
            }
            Window::Rectangular => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSettings {
    pub enabled: bool,
    /// Longest correlation delay; default `10/γ_v`.
    pub tau_max: Option<f64>,
    pub window: Window,
    /// Minimum number of start times averaged over one common drive period;
    /// raised as needed to cancel the cross terms between drive harmonics.
    pub samples: usize,
}

impl Default for SpectrumSettings {
    fn default() -> Self {
        SpectrumSettings {
            enabled: false,
            tau_max: None,
            window: Window::HalfHann,
            samples: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    pub fock_cutoff: usize,
    /// Integration horizon; default `8/γ_v`.
    pub t_final: Option<f64>,
    pub rtol: f64,
    pub atol: f64,
    /// Demodulation window `[t_start, t_end]`; default `[5/γ_v, t_final]`.
    pub demod_window: Option<[f64; 2]>,
    pub n_bar_override: Option<f64>,
    pub truncation_threshold: f64,
    pub initial_state: InitialState,
    pub max_steps: u64,
    pub spectrum: SpectrumSettings,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            fock_cutoff: 8,
            t_final: None,
            rtol: 1e-8,
            atol: 1e-10,
            demod_window: None,
            n_bar_override: None,
            truncation_threshold: 1e-6,
            initial_state: InitialState::Thermal,
            max_steps: 200_000_000,
            spectrum: SpectrumSettings::default(),
        }
    }
}

/// Concrete time axis derived from an [`OracleConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Schedule {
    pub t_start: f64,
    pub t_end: f64,
    pub t_final: f64,
    pub tau_max: f64,
}

impl OracleConfig {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            rtol: self.rtol,
            atol: self.atol,
        }
    }

    pub fn schedule(&self, mol: &MoleculeParams) -> Result<Schedule> {
        if self.fock_cutoff < 2 {
            return Err(invalid("oracle.fock_cutoff", "must be at least 2"));
        }
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(invalid("oracle.rtol", "tolerances must be positive"));
        }
        if !(self.truncation_threshold > 0.0) {
            return Err(invalid("oracle.truncation_threshold", "must be positive"));
        }
        if let Some(n) = self.n_bar_override {
            if !(n >= 0.0) || !n.is_finite() {
                return Err(invalid("oracle.n_bar_override", "must be finite and non-negative"));
            }
        }
        if !(mol.gamma_v > 0.0) {
            return Err(invalid("molecule.gamma_v_eV", "oracle needs a positive vibrational damping"));
        }
        let relax = 1.0 / mol.gamma_v;
        let t_final = self.t_final.unwrap_or(8.0 * relax);
        if !(t_final >= 5.0 * relax) || !t_final.is_finite() {
            return Err(invalid(
                "oracle.t_final",
                format!("must be at least 5/γ_v = {:e}", 5.0 * relax),
            ));
        }
        let [t_start, t_end] = self.demod_window.unwrap_or([5.0 * relax, t_final]);
        if !(t_start >= 3.0 * relax) {
            return Err(invalid(
                "oracle.demod_window",
                format!("must start after the transient, t_start >= 3/γ_v = {:e}", 3.0 * relax),
            ));
        }
        if !(t_end > t_start) || t_end > t_final {
            return Err(invalid(
                "oracle.demod_window",
                "need t_start < t_end <= t_final",
            ));
        }
        let tau_max = self.spectrum.tau_max.unwrap_or(10.0 * relax);
        if self.spectrum.enabled {
            if !(tau_max >= 10.0 * relax) || !tau_max.is_finite() {
                return Err(invalid(
                    "oracle.spectrum.tau_max",
                    format!("must be at least 10/γ_v = {:e}", 10.0 * relax),
                ));
            }
            if self.spectrum.samples == 0 {
                return Err(invalid("oracle.spectrum.samples", "must be positive"));
            }
        }
        Ok(Schedule {
            t_start,
            t_end,
            t_final,
            tau_max,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::OracleError;

    fn mol() -> MoleculeParams {
        MoleculeParams {
            omega0: 20.0,
            omega_v: 1.0,
            gamma_perp: 0.05,
            gamma_v: 0.01,
            g: 0.2,
            d_eg: 0.1,
        }
    }

    fn field(r: Result<Schedule>) -> &'static str {
        match r {
            Err(OracleError::InvalidConfig { field, .. }) => field,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defaults() {
        let s = OracleConfig::default().schedule(&mol()).unwrap();
        assert_eq!((s.t_start, s.t_end, s.t_final, s.tau_max), (500.0, 800.0, 800.0, 1000.0));
    }

    #[test]
    fn rejects_short_horizon_and_early_window() {
        let c = OracleConfig { t_final: Some(400.0), ..Default::default() };
        assert_eq!(field(c.schedule(&mol())), "oracle.t_final");
        let c = OracleConfig { demod_window: Some([200.0, 700.0]), ..Default::default() };
        assert_eq!(field(c.schedule(&mol())), "oracle.demod_window");
        let c = OracleConfig { demod_window: Some([400.0, 900.0]), ..Default::default() };
        assert_eq!(field(c.schedule(&mol())), "oracle.demod_window");
        let c = OracleConfig { fock_cutoff: 1, ..Default::default() };
        assert_eq!(field(c.schedule(&mol())), "oracle.fock_cutoff");
    }

    #[test]
    fn spectrum_tau_checked_only_when_enabled() {
        let mut c = OracleConfig::default();
        c.spectrum.tau_max = Some(10.0);
        assert!(c.schedule(&mol()).is_ok());
        c.spectrum.enabled = true;
        assert_eq!(field(c.schedule(&mol())), "oracle.spectrum.tau_max");
    }

    #[test]
    fn half_hann_window() {
        let w = Window::HalfHann;
        assert_eq!(w.weight(0.0, 5.0), 1.0);
        assert!(w.weight(5.0, 5.0) < 1e-30);
        assert!((w.weight(2.5, 5.0) - 0.5).abs() < 1e-15);
    }
}
