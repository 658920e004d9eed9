//! Closed-form perturbative results.

pub mod coherent;
pub mod incoherent;
pub mod lines;
pub mod response;
pub mod susceptibility;

pub use coherent::{
    coherent_bracket, coherent_quanta, coherent_quanta_exact, coherent_quanta_resonant,
    coherent_sideband_weights, coherent_stokes_antistokes_ratio, coherent_vibration_amplitude,
    resonant_to_background_ratio, third_order_amplitude, Branch, CoherentAmplitude,
};
pub use incoherent::{
    incoherent_spectrum, incoherent_spectrum_with_occupation, incoherent_stokes_antistokes_ratio,
};
pub use lines::{DeltaLine, LineLabel, LorentzLine, SpectrumModel};
pub use response::{
    effective_force_components, force_from_response, linear_response, ForceComponent, ForceLabel,
    LinearResponse,
};
pub use susceptibility::{
    chi3, chi3_from_cross_section, chi3_resonant_part, stokes_cross_section,
    stokes_cross_section_quadrature, Chi3Value, CrossSectionQuadrature,
};
