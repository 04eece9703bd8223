//! Spectral mode functions for pulsed quantum optics.
//!
//! A light pulse is described by a normalized complex spectral amplitude
//! `ξ(ω)` (a [`SpectralMode`]), or, for partially coherent light, by a
//! two-frequency correlation kernel `g(ω, ω')` (a [`ModeProfile`]). The
//! quantities that drive the quantum-scissors formulas are overlaps between
//! such modes:
//!
//! - [`inner_product`] gives `(a, b) = ∫ a*(ω) b(ω) dω`.
//! - [`mode_match_profiles`] gives the normalized kernel overlap `|γ₀|²`.
//! - [`decompose`] splits the coherent and single-photon modes against a
//!   detector-resolved mode `ϱ`.
//! - [`gram_schmidt_basis`] builds the orthonormal frame used by the Fock-space
//!   simulator.
//!
//! The [`spdc`] module derives the heralded signal-photon kernel and the
//! coherent-pulse kernel from a Gaussian pump and idler filter, together with
//! the closed-form mode-match bounds.

mod basis;
mod decomposition;
mod mode;
mod profile;
mod source;
pub mod spdc;
mod units;

pub use basis::{gram_matrix, gram_schmidt_basis, gram_schmidt_from_gram, OrthonormalBasis};
pub use decomposition::{decompose, ComponentOverlaps, ModeDecomposition, ModeMatch};
pub use mode::{inner_product, Grid, SpectralMode};
pub use profile::{mode_match_profiles, GaussianKernel, ModeProfile, SampledKernel};
pub use source::PhotonSource;
pub use units::{fwhm_to_sigma, SPEED_OF_LIGHT};

use thiserror::Error;

/// Tolerance on `‖ξ‖² = 1` for a mode to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Residual norm below which a mode is treated as linearly dependent.
pub const DEPENDENCE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("modes are sampled on incompatible grids")]
    GridMismatch,
    #[error("grid must be strictly increasing with at least two points")]
    InvalidGrid,
    #[error("mode is not normalized: |xi|^2 = {0}")]
    NotNormalized(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mode profile has zero trace")]
    DegenerateProfile,
    #[error("probabilities of the mixed source sum to {0}, expected 1")]
    ProbabilitySum(f64),
    #[error("overlaps are not realizable by unit-norm modes: {0}")]
    Unrealizable(String),
    #[error("quadrature error estimate {estimate:e} exceeds {tolerance:e}")]
    Accuracy { estimate: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, SpectralError>;
