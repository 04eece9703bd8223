use num_complex::Complex64;

use crate::{inner_product, Result, SpectralError, SpectralMode, DEPENDENCE_THRESHOLD};

/// Mode-match parameter `|γ₀|²` and its complement `|γ₁|² = 1 - |γ₀|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMatch {
    pub gamma0_sq: f64,
    pub gamma1_sq: f64,
}

impl ModeMatch {
    /// Clamps into `[0, 1]`.
    pub fn from_gamma0_sq(gamma0_sq: f64) -> Self {
        let g = gamma0_sq.clamp(0.0, 1.0);
        Self {
            gamma0_sq: g,
            gamma1_sq: 1.0 - g,
        }
    }

    pub fn from_gamma1_sq(gamma1_sq: f64) -> Self {
        Self::from_gamma0_sq(1.0 - gamma1_sq)
    }
}

/// Overlaps of one photon component `ζ_j` against `ϱ` and `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentOverlaps {
    pub p: f64,
    /// `χ_j = (ϱ, ζ_j)`
    pub chi: Complex64,
    /// `Ξ_j = (ϱ⊥_ζj, ζ_j) = √(1 - |χ_j|²)`
    pub xi_perp: f64,
    /// `Υ_j = (ζ_j, ξ)`
    pub upsilon: Complex64,
    /// `(ϱ⊥_ζj, ϱ⊥_ξ)`; `None` when either complement mode is empty.
    pub complement_overlap: Option<Complex64>,
}

impl ComponentOverlaps {
    pub fn is_degenerate(&self) -> bool {
        self.complement_overlap.is_none()
    }
}

/// Splitting of the coherent mode `ξ = κϱ + μϱ⊥_ξ` and of each photon mode
/// `ζ_j = χ_jϱ + Ξ_jϱ⊥_ζj` against the detector-resolved mode `ϱ`.
///
/// `μ` and `Ξ_j` are taken real and nonnegative: their phases are absorbed
/// into the complement modes, which never appear on their own in physical
/// results.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeDecomposition {
    /// `κ = (ϱ, ξ)`
    pub kappa: Complex64,
    /// `μ = √(1 - |κ|²)`
    pub mu: f64,
    pub components: Vec<ComponentOverlaps>,
}

impl ModeDecomposition {
    /// Builds a decomposition directly from overlap scalars
    /// `(p_j, χ_j, Υ_j)`, checking that unit-norm modes with these overlaps
    /// exist.
    pub fn from_overlaps(
        kappa: Complex64,
        components: &[(f64, Complex64, Complex64)],
    ) -> Result<Self> {
        check_probabilities(components.iter().map(|c| c.0))?;
        if kappa.norm() > 1.0 + 1e-10 {
            return Err(SpectralError::Unrealizable(format!(
                "|kappa| = {}",
                kappa.norm()
            )));
        }
        let mu = (1.0 - kappa.norm_sqr()).max(0.0).sqrt();
        let components = components
            .iter()
            .map(|&(p, chi, upsilon)| {
                if chi.norm() > 1.0 + 1e-10 || upsilon.norm() > 1.0 + 1e-10 {
                    return Err(SpectralError::Unrealizable(format!(
                        "|chi| = {}, |upsilon| = {}",
                        chi.norm(),
                        upsilon.norm()
                    )));
                }
                let xi_perp = (1.0 - chi.norm_sqr()).max(0.0).sqrt();
                let complement_overlap = complement(kappa, mu, chi, xi_perp, upsilon)?;
                Ok(ComponentOverlaps {
                    p,
                    chi,
                    xi_perp,
                    upsilon,
                    complement_overlap,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kappa,
            mu,
            components,
        })
    }

    /// `|γ₀|² = Σ_j p_j |Υ_j|²`.
    pub fn mode_match(&self) -> ModeMatch {
        ModeMatch::from_gamma0_sq(
            self.components
                .iter()
                .map(|c| c.p * c.upsilon.norm_sqr())
                .sum(),
        )
    }

    pub fn has_degeneracy(&self) -> bool {
        self.components.iter().any(ComponentOverlaps::is_degenerate)
    }
}

fn check_probabilities(ps: impl Iterator<Item = f64>) -> Result<()> {
    let mut sum = 0.0;
    for p in ps {
        if !(p >= 0.0) {
            return Err(SpectralError::InvalidParameter(format!(
                "negative component probability {p}"
            )));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > 1e-10 {
        return Err(SpectralError::ProbabilitySum(sum));
    }
    Ok(())
}

fn complement(
    kappa: Complex64,
    mu: f64,
    chi: Complex64,
    xi_perp: f64,
    upsilon: Complex64,
) -> Result<Option<Complex64>> {
    if mu < DEPENDENCE_THRESHOLD || xi_perp < DEPENDENCE_THRESHOLD {
        return Ok(None);
    }
    let c = (upsilon - kappa * chi.conj()) / (mu * xi_perp);
    // rounding in |κ|², |χ|² is amplified by 1/(μΞ) near degeneracy
    let slack = 1e-10 + 1e-15 / (mu * xi_perp);
    if c.norm() > 1.0 + slack {
        return Err(SpectralError::Unrealizable(format!(
            "complement overlap magnitude {}",
            c.norm()
        )));
    }
    Ok(Some(if c.norm() > 1.0 { c / c.norm() } else { c }))
}

/// Decomposes a mixed photon `{(p_j, ζ_j)}` and the coherent mode `ξ`
/// against the resolved mode `ϱ`.
pub fn decompose(
    zetas: &[(f64, SpectralMode)],
    xi: &SpectralMode,
    rho: &SpectralMode,
) -> Result<ModeDecomposition> {
    check_probabilities(zetas.iter().map(|c| c.0))?;
    let kappa = inner_product(rho, xi)?;
    let overlaps = zetas
        .iter()
        .map(|(p, zeta)| Ok((*p, inner_product(rho, zeta)?, inner_product(zeta, xi)?)))
        .collect::<Result<Vec<_>>>()?;
    ModeDecomposition::from_overlaps(kappa, &overlaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resolved_mode_equal_to_coherent_mode() {
        let xi = SpectralMode::gaussian_with_phase(0.0, 1.0, 0.4).unwrap();
        let zeta = SpectralMode::gaussian_with_phase(0.8, 1.2, -0.3).unwrap();
        let d = decompose(&[(1.0, zeta)], &xi, &xi).unwrap();
        assert!((d.kappa - c(1.0, 0.0)).norm() < 1e-15);
        assert!(d.mu < 1e-7);
        let comp = d.components[0];
        assert!((comp.chi - comp.upsilon.conj()).norm() < 1e-15);
        assert!(comp.is_degenerate());
    }

    #[test]
    fn resolved_mode_equal_to_photon_mode() {
        let xi = SpectralMode::gaussian(0.0, 1.0).unwrap();
        let zeta = SpectralMode::gaussian_with_phase(0.5, 0.9, 1.3).unwrap();
        let d = decompose(&[(1.0, zeta.clone())], &xi, &zeta).unwrap();
        let comp = d.components[0];
        assert!((comp.chi - c(1.0, 0.0)).norm() < 1e-15);
        assert!((d.kappa - comp.upsilon).norm() < 1e-15);
    }

    #[test]
    fn orthogonal_resolved_mode() {
        let d = ModeDecomposition::from_overlaps(c(0.6, 0.0), &[(1.0, c(0.0, 0.0), c(0.5, 0.0))])
            .unwrap();
        assert_eq!(d.components[0].xi_perp, 1.0);
        assert!((d.mu - 0.8).abs() < 1e-15);
        let co = d.components[0].complement_overlap.unwrap();
        assert!((co - c(0.5 / 0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            ModeDecomposition::from_overlaps(c(1.0, 0.0), &[(0.5, c(1.0, 0.0), c(1.0, 0.0))]),
            Err(SpectralError::ProbabilitySum(_))
        ));
        // implied complement overlap of 9
        assert!(matches!(
            ModeDecomposition::from_overlaps(c(0.9, 0.0), &[(1.0, c(-0.9, 0.0), c(0.9, 0.0))]),
            Err(SpectralError::Unrealizable(_))
        ));
    }

    #[test]
    fn mode_match_is_weighted() {
        let d = ModeDecomposition::from_overlaps(
            c(0.5, 0.0),
            &[
                (0.25, c(0.1, 0.0), c(0.8, 0.0)),
                (0.75, c(0.2, 0.0), c(0.0, 0.4)),
            ],
        )
        .unwrap();
        let m = d.mode_match();
        assert!((m.gamma0_sq - (0.25 * 0.64 + 0.75 * 0.16)).abs() < 1e-15);
        assert_eq!(m.gamma0_sq + m.gamma1_sq, 1.0);
    }
}
