//! Unit conventions. Energies in eV (ħ = 1), lengths in nm, Gaussian
//! electrostatics.

/// ħc in eV·nm.
pub const HBAR_C_EV_NM: f64 = 197.327;

/// Elementary charge squared in Gaussian units, eV·nm.
pub const E_SQUARED_EV_NM: f64 = 1.43996;

/// One eV in erg.
pub const EV_IN_ERG: f64 = 1.602_176_634e-12;

/// Number density conversion: 1 cm⁻³ = 10⁻²¹ nm⁻³.
pub const PER_CM3_IN_PER_NM3: f64 = 1e-21;

/// Volume conversion: 1 mm³ = 10⁻³ cm³.
pub const MM3_IN_CM3: f64 = 1e-3;

/// Metres per nanometre.
pub const NM_IN_M: f64 = 1e-9;

/// Wavenumber (angular, rad/nm) of a photon with energy `omega` eV.
pub fn wavenumber(omega: f64) -> f64 {
    omega / HBAR_C_EV_NM
}

/// Fourth power of a transition dipole given in e·nm, returned in eV²·nm⁶.
pub fn dipole_fourth_power(d_eg: f64) -> f64 {
    let d2 = d_eg * d_eg * E_SQUARED_EV_NM; // eV·nm³
    d2 * d2
}
