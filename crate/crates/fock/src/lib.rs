//! Truncated multimode Fock space for the quantum-scissors interferometer.
//!
//! Every optical mode is a pair (spatial port, spectral basis index). States
//! are sparse maps from packed occupation numbers to amplitudes, truncated at
//! a total photon number. Beam splitters act identically on each spectral
//! index; photodetector POVMs are diagonal in the occupation basis.

mod beamsplitter;
mod density;
mod detectors;
mod occupation;
mod operator;
mod state;

pub use beamsplitter::{apply_beamsplitter, apply_beamsplitter_mode, BeamSplitter};
pub use density::{conditional_state, conditional_state_pure, DensityOp};
pub use detectors::{
    povm_click_conventional, povm_completeness_check, povm_no_click,
    povm_one_click_number_resolving, DetectorKind, DetectorSpec, RESOLVED_INDEX,
};
pub use occupation::{ModeIndex, Occupation, Port, MAX_OCCUPATION, SPECTRAL_SLOTS};
pub use operator::{mode_number_projector, total_number_projector, Counting, DiagonalOp, Weight};
pub use state::{
    coherent_state, cutoff_for, poisson_tail, single_photon_state, FockVector, CUTOFF_CAP,
    TAIL_BOUND,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("cutoff {cutoff} leaves a Poisson tail of {tail:e} (bound {bound:e})")]
    CutoffTooSmall {
        cutoff: usize,
        tail: f64,
        bound: f64,
    },
    #[error("mean photon number {0} needs a cutoff above the cap of {CUTOFF_CAP}")]
    CutoffCap(f64),
    #[error("conditioning event has probability {0:e}")]
    ZeroProbability(f64),
    #[error("mode coefficients must be unit norm and fit {SPECTRAL_SLOTS} slots: {0}")]
    InvalidCoefficients(String),
    #[error("states occupy the same port")]
    PortOverlap,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, FockError>;
