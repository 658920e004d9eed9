//! Analytic model of Raman-signal enhancement by coherent infrared pumping.
//!
//! A molecule is treated as an electronic two-level system (TLS) coupled to a
//! single vibrational mode through a Fröhlich term, and driven by a visible
//! probe and an IR pump. The IR pump drives the vibration parametrically at
//! `2ω_IR`; when that matches `ω_v` the coherent vibrational amplitude produces
//! Stokes and anti-Stokes lines at `ω_vis ∓ 2ω_IR` whose intensity scales with
//! the square of the number of illuminated molecules.
//!
//! Everything is in eV with ħ = 1: frequencies, rates and temperatures are
//! energies. Lengths are nm unless a function says otherwise.

pub mod analytic;
pub mod ensemble;
mod error;
pub mod model;
pub mod quad;
pub mod spectrum;
pub mod units;

pub use error::{PhysicsError, Result};
pub use model::{
    perturbation_parameter, thermal_occupation, validate_params, Diagnostics, DriveParams,
    Environment, MoleculeParams, Thresholds, Warning,
};
