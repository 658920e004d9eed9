//! Numerical reference for the analytic model: the Lindblad master equation of
//! the driven TLS plus vibrational mode, integrated in a truncated Fock basis.
//!
//! `simulate` demodulates `⟨b(t)⟩` at `2ω_IR` after transients have decayed,
//! `emission_spectrum` evaluates the TLS emission from the two-time
//! correlation, and `compare_with_analytic` sets the results against the
//! closed-form amplitudes.

pub mod compare;
pub mod config;
pub mod demod;
mod error;
pub mod integrator;
pub mod master;
pub mod scan;
pub mod simulate;
pub mod spectrum;

pub use compare::{compare_with_analytic, RowStatus, ValidationReport, ValidationRow};
pub use config::{InitialState, OracleConfig, Schedule, SpectrumSettings, Window};
pub use error::{OracleError, Result};
pub use scan::{power_law_scan, resonance_scan, symmetric_detunings, LorentzFit, PowerLaw, ResonanceScan};
pub use simulate::{simulate, InvariantReport, OracleResult};
pub use spectrum::{common_period, emission_spectrum, OracleSpectrum};
