use qsd_spectral::SpectralMode;

use crate::{Counting, DiagonalOp, FockError, Port, Result, Weight};

/// Spectral basis index a mode-resolving detector counts. Simulations must
/// order their basis so the resolved mode comes first.
pub const RESOLVED_INDEX: usize = 0;

#[derive(Debug, Clone, PartialEq)]
pub enum DetectorKind {
    /// Counts photons in the resolved mode `ϱ` only.
    NumberResolvingModeResolving(SpectralMode),
    /// Counts photons in every mode.
    NumberResolvingModeUnresolving,
    /// On/off detector.
    ConventionalOnOff,
}

impl DetectorKind {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorKind::NumberResolvingModeResolving(_) => "mode-resolving",
            DetectorKind::NumberResolvingModeUnresolving => "mode-unresolving",
            DetectorKind::ConventionalOnOff => "conventional",
        }
    }

    pub fn counting(&self) -> Counting {
        match self {
            DetectorKind::NumberResolvingModeResolving(_) => Counting::Mode(RESOLVED_INDEX),
            _ => Counting::Total,
        }
    }
}

/// Photodetector with efficiency `η` and no dark counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSpec {
    pub kind: DetectorKind,
    pub eta: f64,
}

impl DetectorSpec {
    pub fn new(kind: DetectorKind, eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(FockError::InvalidParameter(format!(
                "efficiency {eta} outside [0, 1]"
            )));
        }
        Ok(Self { kind, eta })
    }

    /// The heralding element: one click for number-resolving detectors,
    /// any click for on/off detectors.
    pub fn click(&self, port: Port) -> DiagonalOp {
        match self.kind {
            DetectorKind::ConventionalOnOff => povm_click_conventional(self, port),
            _ => povm_one_click_number_resolving(self, port),
        }
    }

    pub fn no_click(&self, port: Port) -> DiagonalOp {
        povm_no_click(self, port)
    }
}

fn op(spec: &DetectorSpec, port: Port, weight: Weight) -> DiagonalOp {
    DiagonalOp {
        port,
        counting: spec.kind.counting(),
        weight,
    }
}

/// `Π₀ = Σ_m (1-η)^m P_m`.
pub fn povm_no_click(spec: &DetectorSpec, port: Port) -> DiagonalOp {
    op(spec, port, Weight::NoClick(spec.eta))
}

/// `Π₁ = Σ_m m η (1-η)^(m-1) P_m`.
pub fn povm_one_click_number_resolving(spec: &DetectorSpec, port: Port) -> DiagonalOp {
    op(spec, port, Weight::OneClick(spec.eta))
}

/// `Π₁ = 1 - Σ_m (1-η)^m P_m`.
pub fn povm_click_conventional(spec: &DetectorSpec, port: Port) -> DiagonalOp {
    op(spec, port, Weight::Click(spec.eta))
}

/// Largest deviation of `Σ_n Π_n` from the identity over every occupation of
/// `port` with at most `cutoff` photons.
pub fn povm_completeness_check(spec: &DetectorSpec, port: Port, cutoff: usize) -> f64 {
    let no = povm_no_click(spec, port);
    let mut worst: f64 = 0.0;
    for (o, w0) in no.spectrum(cutoff) {
        let sum = match spec.kind {
            DetectorKind::ConventionalOnOff => {
                w0 + povm_click_conventional(spec, port).eigenvalue(o)
            }
            _ => {
                let m = no.count(o);
                let one = povm_one_click_number_resolving(spec, port).eigenvalue(o);
                w0 + one
                    + (2..=m)
                        .map(|n| op(spec, port, Weight::Count { eta: spec.eta, n }).eigenvalue(o))
                        .sum::<f64>()
            }
        };
        worst = worst.max((sum - 1.0).abs());
    }
    worst
}
