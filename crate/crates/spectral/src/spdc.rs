//! Heralded single photons from pulsed SPDC with a Gaussian pump and a
//! Gaussian idler filter, and their mode match with the coherent pulse.
//!
//! All widths are `σ` in rad/s. Kernels are real Gaussians, so overlaps have
//! closed forms; [`gamma0_numeric`] evaluates the same integrals by
//! quadrature as an independent check.

use crate::{fwhm_to_sigma, GaussianKernel, ModeProfile, Result, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpSpectrum {
    pub amplitude: f64,
    pub center: f64,
    pub sigma: f64,
}

impl PumpSpectrum {
    pub fn new(center: f64, sigma: f64) -> Result<Self> {
        positive("pump width", sigma)?;
        Ok(Self {
            amplitude: 1.0,
            center,
            sigma,
        })
    }
}

/// Gaussian intensity transmission `F₀·exp(-(ω-ω⁰_i)²/σ_i²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub peak: f64,
    pub center: f64,
    pub sigma: f64,
}

impl FilterSpec {
    pub fn new(center: f64, sigma: f64) -> Result<Self> {
        positive("filter width", sigma)?;
        Ok(Self {
            peak: 1.0,
            center,
            sigma,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdcChain {
    pub pump: PumpSpectrum,
    pub idler_filter: FilterSpec,
    pub sigma_c: f64,
    pub omega_c: f64,
    /// Identical Gaussian filter on the signal and coherent arms.
    pub sigma_f: Option<f64>,
}

impl SpdcChain {
    /// Degenerate configuration: idler filter and coherent pulse centered at
    /// half the pump frequency.
    pub fn new(
        pump: PumpSpectrum,
        idler_sigma: f64,
        sigma_c: f64,
        sigma_f: Option<f64>,
    ) -> Result<Self> {
        positive("coherent width", sigma_c)?;
        if let Some(f) = sigma_f {
            positive("post-filter width", f)?;
        }
        Ok(Self {
            pump,
            idler_filter: FilterSpec::new(pump.center / 2.0, idler_sigma)?,
            sigma_c,
            omega_c: pump.center / 2.0,
            sigma_f,
        })
    }

    /// Builds the chain from FWHM bandwidths in metres. The pump is the
    /// frequency-doubled laser at `λ_c/2`; idler and post filters are
    /// converted at `λ_c`.
    pub fn from_bandwidths(
        lambda_c: f64,
        fwhm_c: f64,
        fwhm_p: f64,
        fwhm_i: f64,
        fwhm_f: Option<f64>,
    ) -> Result<Self> {
        let omega_p = 2.0 * std::f64::consts::TAU * crate::SPEED_OF_LIGHT / lambda_c;
        let pump = PumpSpectrum::new(omega_p, fwhm_to_sigma(fwhm_p, lambda_c / 2.0)?)?;
        let sigma_f = fwhm_f.map(|f| fwhm_to_sigma(f, lambda_c)).transpose()?;
        Self::new(
            pump,
            fwhm_to_sigma(fwhm_i, lambda_c)?,
            fwhm_to_sigma(fwhm_c, lambda_c)?,
            sigma_f,
        )
    }

    fn kernels(&self) -> Result<(GaussianKernel, GaussianKernel)> {
        let signal = signal_kernel(&self.pump, &self.idler_filter)?;
        let coherent = coherent_kernel(self.omega_c, self.sigma_c)?;
        match self.sigma_f {
            None => Ok((signal, coherent)),
            Some(f) => Ok((
                signal.filtered(self.omega_c, f)?,
                coherent.filtered(self.omega_c, f)?,
            )),
        }
    }

    /// `|γ₀|²` from the Gaussian kernel overlap. Handles detuned centers,
    /// unlike the width-only formulas.
    pub fn gamma0(&self) -> Result<f64> {
        let (s, c) = self.kernels()?;
        Ok((s.overlap(&c) / (s.trace() * c.trace())).clamp(0.0, 1.0))
    }
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(SpectralError::InvalidParameter(format!(
            "{what} must be positive, got {v}"
        )))
    }
}

fn signal_kernel(pump: &PumpSpectrum, filter: &FilterSpec) -> Result<GaussianKernel> {
    positive("pump width", pump.sigma)?;
    positive("filter width", filter.sigma)?;
    let sp2 = pump.sigma * pump.sigma;
    let si2 = filter.sigma * filter.sigma;
    let s = sp2 + si2;
    GaussianKernel::new(pump.center - filter.center, 0.5 / s, si2 / (4.0 * sp2 * s))
}

fn coherent_kernel(omega_c: f64, sigma_c: f64) -> Result<GaussianKernel> {
    positive("coherent width", sigma_c)?;
    GaussianKernel::new(omega_c, 0.5 / (sigma_c * sigma_c), 0.0)
}

/// Unit-trace kernel of the heralded signal photon.
pub fn signal_mode_profile(pump: &PumpSpectrum, filter: &FilterSpec) -> Result<ModeProfile> {
    Ok(ModeProfile::Gaussian(signal_kernel(pump, filter)?))
}

/// Unit-trace rank-one kernel of a Gaussian coherent pulse.
pub fn coherent_profile(omega_c: f64, sigma_c: f64) -> Result<ModeProfile> {
    Ok(ModeProfile::Gaussian(coherent_kernel(omega_c, sigma_c)?))
}

/// `|γ₀|²` without post-filtering,
/// `2σ_cσ_p/(σ_c²+σ_p²) · (1 + σ_i²/(σ_c²+σ_p²))^(-1/2)`.
pub fn gamma0_lower_bound(sigma_c: f64, sigma_p: f64, sigma_i: f64) -> Result<f64> {
    positive("coherent width", sigma_c)?;
    positive("pump width", sigma_p)?;
    positive("filter width", sigma_i)?;
    let s = sigma_c * sigma_c + sigma_p * sigma_p;
    Ok(2.0 * sigma_c * sigma_p / s / (1.0 + sigma_i * sigma_i / s).sqrt())
}

/// `|γ₀|²` with both arms passed through a Gaussian filter of width `σ_f`
/// centered on the pulses. With `μ_k = (σ_k/σ_f)²` and
/// `D = μ_c + μ_p + 4μ_cμ_p`:
///
/// `2√(μ_cμ_p(1+2μ_c)) √(1+2(μ_p+μ_i)) / (D √(1 + μ_i(1+4μ_c)/D))`.
pub fn gamma0_post_filtered(sigma_c: f64, sigma_p: f64, sigma_i: f64, sigma_f: f64) -> Result<f64> {
    positive("coherent width", sigma_c)?;
    positive("pump width", sigma_p)?;
    positive("filter width", sigma_i)?;
    positive("post-filter width", sigma_f)?;
    let f2 = sigma_f * sigma_f;
    let (mc, mp, mi) = (
        sigma_c * sigma_c / f2,
        sigma_p * sigma_p / f2,
        sigma_i * sigma_i / f2,
    );
    let d = mc + mp + 4.0 * mc * mp;
    let num = 2.0 * (mc * mp * (1.0 + 2.0 * mc)).sqrt() * (1.0 + 2.0 * (mp + mi)).sqrt();
    Ok((num / (d * (1.0 + mi * (1.0 + 4.0 * mc) / d).sqrt())).min(1.0))
}

/// Quadrature tolerance for [`gamma0_numeric`].
pub const NUMERIC_TOLERANCE: f64 = 1e-6;

/// `|γ₀|²` by trapezoidal quadrature of the sampled kernels. The grid is
/// refined until successive estimates agree; an accuracy error is returned
/// if the last difference still exceeds [`NUMERIC_TOLERANCE`].
pub fn gamma0_numeric(chain: &SpdcChain) -> Result<f64> {
    let (s, c) = chain.kernels()?;
    // diagonal falls off like exp(-2A x²); cover 9 standard widths of both
    let reach = 9.0 * (0.25 / s.diag).sqrt().max((0.25 / c.diag).sqrt());
    let lo = s.center.min(c.center) - reach;
    let hi = s.center.max(c.center) + reach;

    let mut n = 129;
    let mut prev = quadrature(&s, &c, lo, hi, n);
    let mut diff = f64::INFINITY;
    while n < 4097 {
        n = 2 * n - 1;
        let next = quadrature(&s, &c, lo, hi, n);
        diff = (next - prev).abs();
        prev = next;
        if diff < 1e-3 * NUMERIC_TOLERANCE {
            break;
        }
    }
    if diff > NUMERIC_TOLERANCE {
        return Err(SpectralError::Accuracy {
            estimate: diff,
            tolerance: NUMERIC_TOLERANCE,
        });
    }
    Ok(prev.clamp(0.0, 1.0))
}

fn quadrature(s: &GaussianKernel, c: &GaussianKernel, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / (n - 1) as f64;
    let x: Vec<f64> = (0..n).map(|k| lo + h * k as f64).collect();
    let w = |k: usize| if k == 0 || k == n - 1 { 0.5 * h } else { h };
    let (mut num, mut ts, mut tc) = (0.0, 0.0, 0.0);
    for k in 0..n {
        ts += w(k) * s.value(x[k], x[k]);
        tc += w(k) * c.value(x[k], x[k]);
        let mut row = 0.0;
        for l in 0..n {
            row += w(l) * s.value(x[k], x[l]) * c.value(x[l], x[k]);
        }
        num += w(k) * row;
    }
    num / (ts * tc)
}
