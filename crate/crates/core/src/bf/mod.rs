//! Boolean functions: representation, transforms and cryptographic properties.

mod annihilator;
mod properties;
pub mod text;
mod transform;
mod truth_table;

pub(crate) use annihilator::masks_of_weight;
pub use annihilator::{algebraic_immunity, MAX_AI_VARIABLES};
pub use properties::{
    classify, correlation_immunity_from_walsh, correlation_immunity_order, covering_radius_bound,
    indicators, is_bent_from_walsh, linear_structures, nonlinearity, nonlinearity_from_walsh,
    PropertyReport,
};
pub(crate) use transform::parity;
pub use transform::{
    autocorrelation, autocorrelation_direct, autocorrelation_from_walsh, moebius_transform,
    walsh_spectrum, AnfCoefficients, AutocorrelationSpectrum, WalshSpectrum,
};
pub use truth_table::{TruthTable, MAX_VARIABLES};
