//! Closed-form engine for the quantum-scissors device.
//!
//! A heralded single photon `Σ_j p_j |1;ζ_j⟩⟨1;ζ_j|` enters BS1 and a
//! coherent pulse `|α;ξ⟩` enters BS2. Conditioned on one click at D2 and
//! none at D3, the output port carries a vacuum/one-photon state whose
//! density elements, heralding probability `P₁₀` and fidelity to
//! `(|0⟩ + α|1;ξ⟩)/√(1+|α|²)` are given here for three detector families.
//! The [`preparation`] module optimizes `|α|` to prepare
//! `(|0⟩ + β|1;ξ⟩)/√(1+|β|²)` instead.

mod expectation;
mod input;
pub mod preparation;
mod truncation;

pub use expectation::{density_elements, expectation_table, ExpectationTable};
pub use input::QsdInput;
pub use preparation::{
    optimize_alpha_closed, optimize_alpha_numeric, prepare_fidelity, PreparationModel,
    PreparationResult,
};
pub use truncation::{
    conventional_from_overlaps, fidelity_conventional, fidelity_general, fidelity_mode_unresolving,
    fidelity_resolving_coherent_mode, fidelity_resolving_photon_mode_ideal,
    mode_resolving_from_decomposition, mode_unresolving_from_overlaps, truncate,
    truncate_conventional, truncate_mode_resolving, truncate_mode_unresolving, Aggregates,
    DensityElements, TruncationResult,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("heralding event has zero probability")]
    ZeroProbability,
    #[error("fidelity denominator vanishes")]
    Degenerate,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("detector {0} needs both detectors to share efficiency")]
    UnequalEfficiency(&'static str),
    #[error("detectors D2 and D3 are of different kinds")]
    MixedDetectors,
    #[error(transparent)]
    Spectral(#[from] qsd_spectral::SpectralError),
}

pub type Result<T> = std::result::Result<T, CoreError>;
