//! Parameter sweeps, SPDC mode-match estimates and oracle cross-checks for
//! the quantum-scissors device, emitted as CSV.

pub mod cloud;
pub mod commands;
pub mod config;
pub mod format;

pub use cloud::{
    compare_all, compare_point, sample_cloud, CloudPoint, CloudSpec, Comparison, Diffs,
};
pub use commands::{cmd_oracle_check, cmd_prepare, cmd_spdc, cmd_truncate, Detector, OracleCheck};
pub use config::{parse_grid, Config};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qsd_core::CoreError),
    #[error(transparent)]
    Spectral(#[from] qsd_spectral::SpectralError),
    #[error(transparent)]
    Fock(#[from] qsd_fock::FockError),
    #[error(transparent)]
    Oracle(#[from] qsd_oracle::OracleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
