use std::f64::consts::{LN_2, PI};

use crate::{Result, SpectralError};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a wavelength FWHM into the Gaussian frequency width σ (rad/s),
/// `σ = π c Δλ / (λ² √ln2)`, valid for `Δλ ≪ λ`. Both arguments in metres.
pub fn fwhm_to_sigma(delta_lambda: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(delta_lambda >= 0.0) || !delta_lambda.is_finite() || !lambda.is_finite()
    {
        return Err(SpectralError::InvalidParameter(format!(
            "bandwidth conversion needs lambda > 0 and delta_lambda >= 0 (got {delta_lambda}, {lambda})"
        )));
    }
    Ok((1.0 / LN_2).sqrt() * PI * SPEED_OF_LIGHT * delta_lambda / (lambda * lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laser_and_pump_widths() {
        let sc = fwhm_to_sigma(7e-9, 790e-9).unwrap();
        assert!((sc - 1.268_82e13).abs() / sc < 1e-5, "{sc}");
        let sp = fwhm_to_sigma(4e-9, 395e-9).unwrap();
        assert!((sp - 2.900_17e13).abs() / sp < 1e-5, "{sp}");
    }

    #[test]
    fn zero_width() {
        assert_eq!(fwhm_to_sigma(0.0, 790e-9).unwrap(), 0.0);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(fwhm_to_sigma(-1e-9, 790e-9).is_err());
        assert!(fwhm_to_sigma(1e-9, 0.0).is_err());
        assert!(fwhm_to_sigma(f64::NAN, 790e-9).is_err());
    }
}
