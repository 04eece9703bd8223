use num_complex::Complex64;
use qsd_fock::DetectorSpec;
use qsd_spectral::{PhotonSource, SpectralMode};

use crate::{CoreError, Result};

/// Everything that determines one truncation run.
#[derive(Debug, Clone, PartialEq)]
pub struct QsdInput {
    pub source: PhotonSource,
    pub alpha: Complex64,
    pub xi: SpectralMode,
    /// Heralding detector at `c₂`.
    pub d2: DetectorSpec,
    /// Vetoing detector at `c₃`.
    pub d3: DetectorSpec,
}

impl QsdInput {
    /// Both detectors identical.
    pub fn new(
        source: PhotonSource,
        alpha: Complex64,
        xi: SpectralMode,
        detector: DetectorSpec,
    ) -> Self {
        Self {
            source,
            alpha,
            xi,
            d2: detector.clone(),
            d3: detector,
        }
    }

    /// Gives D3 its own efficiency.
    pub fn with_d3_eta(mut self, eta: f64) -> Result<Self> {
        self.d3 = DetectorSpec::new(self.d3.kind, eta)
            .map_err(|e| CoreError::InvalidParameter(e.to_string()))?;
        Ok(self)
    }

    pub(crate) fn check_kinds(&self) -> Result<()> {
        if self.d2.kind != self.d3.kind {
            return Err(CoreError::MixedDetectors);
        }
        Ok(())
    }

    pub(crate) fn shared_eta(&self) -> Result<f64> {
        self.check_kinds()?;
        if self.d2.eta != self.d3.eta {
            return Err(CoreError::UnequalEfficiency(self.d2.kind.name()));
        }
        Ok(self.d2.eta)
    }
}
