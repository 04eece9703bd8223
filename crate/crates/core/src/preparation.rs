//! Preparing `(|0⟩ + β|1;ξ⟩)/√(1+|β|²)` by tuning the coherent amplitude.
//!
//! `α` is taken real and nonnegative with the phase of `β`, so only `|β|`
//! enters.

use crate::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparationResult {
    pub beta: f64,
    pub alpha_opt: f64,
    pub f_max: f64,
}

/// Detector family and the mode-mismatch data it depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PreparationModel {
    ModeUnresolving {
        gamma0_sq: f64,
        eta: f64,
    },
    Conventional {
        gamma0_sq: f64,
        eta: f64,
    },
    /// `κ` and the aggregates `Γ_χ`, `Γ_Υ`, `Γ_m` of the decomposition
    /// against the resolved mode.
    ModeResolving {
        kappa_sq: f64,
        gamma_chi: f64,
        gamma_upsilon: f64,
        gamma_m: f64,
        eta: f64,
    },
}

impl PreparationModel {
    pub fn fidelity(&self, beta: f64, alpha: f64) -> f64 {
        let b = beta.abs();
        let a2 = alpha * alpha;
        match *self {
            PreparationModel::ModeUnresolving { gamma0_sq, eta } => {
                prepare_fidelity(b, alpha, gamma0_sq, eta)
            }
            PreparationModel::Conventional { gamma0_sq: g, eta } => {
                let x = (-eta * a2 / 2.0).exp();
                let d00 = 2.0 * (2.0 - eta) + eta * eta * a2 * g - 4.0 * x * (1.0 - eta);
                let d11 = 4.0 * (1.0 - x);
                (d00 + 4.0 * eta * alpha * b * g + d11 * b * b * g) / ((1.0 + b * b) * (d00 + d11))
            }
            PreparationModel::ModeResolving {
                kappa_sq,
                gamma_chi,
                gamma_upsilon,
                gamma_m,
                eta,
            } => {
                let ak2 = a2 * kappa_sq;
                let base = (1.0 - eta * ak2) * gamma_chi;
                (base + ak2 + 2.0 * alpha * b * gamma_m + ak2 * b * b * gamma_upsilon)
                    / ((1.0 + b * b) * (base + 2.0 * ak2))
            }
        }
    }
}

/// Mode-unresolving detectors:
/// `F = [1 + 2αβγ + (αβ)²γ + (1−η)α²] / [(1+β²)(1+(2−η)α²)]`, `γ = |γ₀|²`.
pub fn prepare_fidelity(beta: f64, alpha: f64, gamma0_sq: f64, eta: f64) -> f64 {
    let (b, a) = (beta.abs(), alpha.abs());
    let g = gamma0_sq;
    (1.0 + 2.0 * a * b * g + a * a * b * b * g + (1.0 - eta) * a * a)
        / ((1.0 + b * b) * (1.0 + (2.0 - eta) * a * a))
}

/// Closed-form optimum of [`prepare_fidelity`]. Without any mode match the
/// best choice is `α = 0`.
pub fn optimize_alpha_closed(beta: f64, gamma0_sq: f64, eta: f64) -> Result<PreparationResult> {
    check(beta, gamma0_sq, eta)?;
    let b = beta.abs();
    let g = gamma0_sq;
    let alpha_opt = if g == 0.0 || b == 0.0 {
        0.0
    } else {
        let e = 2.0 - eta;
        let u = (b * b * g - 1.0) / (2.0 * b * g * e);
        (u * u + 1.0 / e).sqrt() + u
    };
    Ok(PreparationResult {
        beta: b,
        alpha_opt,
        f_max: prepare_fidelity(b, alpha_opt, g, eta),
    })
}

const GRID_POINTS: usize = 2001;

/// Maximizes the model's fidelity over `α ∈ [0, max(4, 4|β|)]`: a coarse grid
/// picks the leftmost best point, golden-section search refines it.
pub fn optimize_alpha_numeric(beta: f64, model: &PreparationModel) -> Result<PreparationResult> {
    let (g, eta) = match *model {
        PreparationModel::ModeUnresolving { gamma0_sq, eta }
        | PreparationModel::Conventional { gamma0_sq, eta } => (gamma0_sq, eta),
        PreparationModel::ModeResolving { kappa_sq, eta, .. } => (kappa_sq, eta),
    };
    check(beta, g, eta)?;
    let b = beta.abs();
    let f = |a: f64| model.fidelity(b, a);
    let hi = f64::max(4.0, 4.0 * b);
    let step = hi / (GRID_POINTS - 1) as f64;

    let mut best = (0, f(0.0));
    for i in 1..GRID_POINTS {
        let v = f(i as f64 * step);
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 * step;
    let up = ((best.0 + 1).min(GRID_POINTS - 1)) as f64 * step;
    let refined = golden_section_max(&f, lo, up, 1e-12);
    let (alpha_opt, f_max) = if f(refined) > best.1 {
        (refined, f(refined))
    } else {
        (best.0 as f64 * step, best.1)
    };
    if !f_max.is_finite() {
        return Err(CoreError::Degenerate);
    }
    Ok(PreparationResult {
        beta: b,
        alpha_opt,
        f_max,
    })
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

fn check(beta: f64, g: f64, eta: f64) -> Result<()> {
    if !beta.is_finite() {
        return Err(CoreError::InvalidParameter(format!("beta = {beta}")));
    }
    if !(0.0..=1.0).contains(&g) {
        return Err(CoreError::InvalidParameter(format!(
            "mode match {g} outside [0, 1]"
        )));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(CoreError::InvalidParameter(format!(
            "efficiency {eta} outside [0, 1]"
        )));
    }
    Ok(())
}
