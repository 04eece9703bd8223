use crate::{inner_product, ModeMatch, Result, SpectralError, SpectralMode};

/// Heralded single photon in the mixed spectral state `Σ_j p_j |1;ζ_j⟩⟨1;ζ_j|`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonSource {
    components: Vec<(f64, SpectralMode)>,
}

impl PhotonSource {
    pub fn new(components: Vec<(f64, SpectralMode)>) -> Result<Self> {
        if components.is_empty() {
            return Err(SpectralError::InvalidParameter(
                "photon source has no components".into(),
            ));
        }
        let mut sum = 0.0;
        for (p, _) in &components {
            if !(*p >= 0.0) {
                return Err(SpectralError::InvalidParameter(format!(
                    "negative probability {p}"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(SpectralError::ProbabilitySum(sum));
        }
        Ok(Self { components })
    }

    pub fn pure(mode: SpectralMode) -> Self {
        Self {
            components: vec![(1.0, mode)],
        }
    }

    pub fn components(&self) -> &[(f64, SpectralMode)] {
        &self.components
    }

    /// `|γ₀|² = Σ_j p_j |(ζ_j, ξ)|²`.
    pub fn mode_match(&self, xi: &SpectralMode) -> Result<ModeMatch> {
        let mut g = 0.0;
        for (p, z) in &self.components {
            g += p * inner_product(z, xi)?.norm_sqr();
        }
        Ok(ModeMatch::from_gamma0_sq(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_probabilities() {
        let z = SpectralMode::gaussian(0.0, 1.0).unwrap();
        assert!(PhotonSource::new(vec![]).is_err());
        assert!(PhotonSource::new(vec![(0.4, z.clone())]).is_err());
        assert!(PhotonSource::new(vec![(-0.1, z.clone()), (1.1, z.clone())]).is_err());
        assert!(PhotonSource::new(vec![(0.4, z.clone()), (0.6, z)]).is_ok());
    }

    #[test]
    fn weighted_mode_match() {
        let xi = SpectralMode::gaussian(0.0, 1.0).unwrap();
        let a = SpectralMode::gaussian(0.5, 1.0).unwrap();
        let src = PhotonSource::new(vec![(0.3, xi.clone()), (0.7, a.clone())]).unwrap();
        let expected = 0.3 + 0.7 * inner_product(&a, &xi).unwrap().norm_sqr();
        assert!((src.mode_match(&xi).unwrap().gamma0_sq - expected).abs() < 1e-15);
    }
}
