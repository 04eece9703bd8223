use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Result, SpectralError, NORM_TOLERANCE};

/// Quadrature grid over angular frequency (rad/s) with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    omega: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    /// Trapezoid weights on arbitrary strictly increasing nodes.
    pub fn from_points(omega: Vec<f64>) -> Result<Self> {
        if omega.len() < 2 || omega.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SpectralError::InvalidGrid);
        }
        let n = omega.len();
        let mut weights = vec![0.0; n];
        for k in 0..n - 1 {
            let h = 0.5 * (omega[k + 1] - omega[k]);
            weights[k] += h;
            weights[k + 1] += h;
        }
        Ok(Self { omega, weights })
    }

    pub fn uniform(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 2 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(SpectralError::InvalidGrid);
        }
        let step = (hi - lo) / (points - 1) as f64;
        let omega = (0..points).map(|k| lo + step * k as f64).collect();
        Self::from_points(omega)
    }

    /// 1025-point grid spanning six widths either side of `center`.
    pub fn default_for(center: f64, sigma_max: f64) -> Result<Self> {
        if !(sigma_max > 0.0) {
            return Err(SpectralError::InvalidParameter(format!(
                "grid width must be positive, got {sigma_max}"
            )));
        }
        Self::uniform(center - 6.0 * sigma_max, center + 6.0 * sigma_max, 1025)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// A normalized spectral amplitude `ξ(ω)`.
///
/// The Gaussian form is `e^{iφ} (πσ²)^{-1/4} exp(-(ω-ω₀)²/(2σ²))`, the same
/// width convention as a Gaussian field spectrum `exp(-(ω-ω₀)²/(2σ²))`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralMode {
    Gaussian {
        center: f64,
        sigma: f64,
        phase: f64,
    },
    Sampled {
        grid: Arc<Grid>,
        amplitudes: Vec<Complex64>,
    },
}

impl SpectralMode {
    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        Self::gaussian_with_phase(center, sigma, 0.0)
    }

    pub fn gaussian_with_phase(center: f64, sigma: f64, phase: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() || !center.is_finite() || !phase.is_finite() {
            return Err(SpectralError::InvalidParameter(format!(
                "gaussian mode needs finite center and positive width (sigma = {sigma})"
            )));
        }
        Ok(SpectralMode::Gaussian {
            center,
            sigma,
            phase,
        })
    }

    /// Sampled mode; the amplitudes must already be normalized on `grid`.
    pub fn sampled(grid: Arc<Grid>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(SpectralError::InvalidParameter(format!(
                "{} amplitudes for a {}-point grid",
                amplitudes.len(),
                grid.len()
            )));
        }
        let norm = quadrature_norm_sq(&grid, &amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(SpectralError::NotNormalized(norm));
        }
        Ok(SpectralMode::Sampled { grid, amplitudes })
    }

    /// Sampled mode rescaled to unit norm.
    pub fn sampled_normalized(grid: Arc<Grid>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(SpectralError::InvalidParameter(format!(
                "{} amplitudes for a {}-point grid",
                amplitudes.len(),
                grid.len()
            )));
        }
        let norm = quadrature_norm_sq(&grid, &amplitudes);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(SpectralError::NotNormalized(norm));
        }
        let scale = norm.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(SpectralMode::Sampled { grid, amplitudes })
    }

    /// Amplitude at a single frequency. Sampled modes interpolate linearly
    /// and vanish outside their grid.
    pub fn amplitude(&self, omega: f64) -> Complex64 {
        match self {
            SpectralMode::Gaussian {
                center,
                sigma,
                phase,
            } => gaussian_amplitude(*center, *sigma, *phase, omega),
            SpectralMode::Sampled { grid, amplitudes } => {
                let w = grid.omega();
                if omega < w[0] || omega > w[w.len() - 1] {
                    return Complex64::new(0.0, 0.0);
                }
                let k = w.partition_point(|&x| x <= omega).clamp(1, w.len() - 1);
                let t = (omega - w[k - 1]) / (w[k] - w[k - 1]);
                amplitudes[k - 1] * (1.0 - t) + amplitudes[k] * t
            }
        }
    }

    /// Values on `grid` (no renormalization).
    pub fn sample_on(&self, grid: &Grid) -> Vec<Complex64> {
        grid.omega().iter().map(|&w| self.amplitude(w)).collect()
    }

    /// `∫|ξ|²dω`; exactly 1 for the Gaussian form.
    pub fn norm_sq(&self) -> f64 {
        match self {
            SpectralMode::Gaussian { .. } => 1.0,
            SpectralMode::Sampled { grid, amplitudes } => quadrature_norm_sq(grid, amplitudes),
        }
    }

    pub fn grid(&self) -> Option<&Arc<Grid>> {
        match self {
            SpectralMode::Gaussian { .. } => None,
            SpectralMode::Sampled { grid, .. } => Some(grid),
        }
    }
}

fn gaussian_amplitude(center: f64, sigma: f64, phase: f64, omega: f64) -> Complex64 {
    let x = (omega - center) / sigma;
    let mag = (PI * sigma * sigma).powf(-0.25) * (-0.5 * x * x).exp();
    Complex64::from_polar(mag, phase)
}

fn quadrature_norm_sq(grid: &Grid, amplitudes: &[Complex64]) -> f64 {
    grid.weights()
        .iter()
        .zip(amplitudes)
        .map(|(w, a)| w * a.norm_sqr())
        .sum()
}

fn quadrature_overlap(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    grid.weights()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| x.conj() * y * *w)
        .sum()
}

/// Overlap `(a, b) = ∫ a*(ω) b(ω) dω`.
///
/// Two Gaussians use the closed form. A Gaussian against a sampled mode is
/// evaluated on the sampled mode's grid. Two sampled modes must share a grid.
pub fn inner_product(a: &SpectralMode, b: &SpectralMode) -> Result<Complex64> {
    use SpectralMode::*;
    match (a, b) {
        (
            Gaussian {
                center: ca,
                sigma: sa,
                phase: pa,
            },
            Gaussian {
                center: cb,
                sigma: sb,
                phase: pb,
            },
        ) => {
            let s2 = sa * sa + sb * sb;
            let d = ca - cb;
            let mag = (2.0 * sa * sb / s2).sqrt() * (-d * d / (2.0 * s2)).exp();
            Ok(Complex64::from_polar(mag, pb - pa))
        }
        (Sampled { grid, amplitudes }, g @ Gaussian { .. }) => {
            Ok(quadrature_overlap(grid, amplitudes, &g.sample_on(grid)))
        }
        (g @ Gaussian { .. }, Sampled { grid, amplitudes }) => {
            Ok(quadrature_overlap(grid, &g.sample_on(grid), amplitudes))
        }
        (
            Sampled {
                grid: ga,
                amplitudes: aa,
            },
            Sampled {
                grid: gb,
                amplitudes: ab,
            },
        ) => {
            if !ga.same_as(gb) {
                return Err(SpectralError::GridMismatch);
            }
            Ok(quadrature_overlap(ga, aa, ab))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn self_overlap_is_one() {
        let g = SpectralMode::gaussian(2.0e15, 1.0e13).unwrap();
        let v = inner_product(&g, &g).unwrap();
        assert!(close(v.re, 1.0, 1e-15) && v.im.abs() < 1e-15);

        let grid = Arc::new(Grid::uniform(-8.0, 8.0, 801).unwrap());
        let s = SpectralMode::sampled_normalized(grid.clone(), g_on(&grid, 0.3, 1.1)).unwrap();
        let v = inner_product(&s, &s).unwrap();
        assert!(close(v.re, 1.0, 1e-12));
    }

    fn g_on(grid: &Grid, c: f64, s: f64) -> Vec<Complex64> {
        SpectralMode::gaussian(c, s).unwrap().sample_on(grid)
    }

    #[test]
    fn shifted_gaussians() {
        // equal widths: (a, b) = exp(-Δ²/(4σ²))
        let sigma = 3.0;
        let a = SpectralMode::gaussian(0.0, sigma).unwrap();
        let b = SpectralMode::gaussian(sigma * 2.0 * 2f64.ln().sqrt(), sigma).unwrap();
        let v = inner_product(&a, &b).unwrap();
        assert!(close(v.re, 0.5, 1e-14));
        let b = SpectralMode::gaussian(sigma * (2.0 * 2f64.ln()).sqrt(), sigma).unwrap();
        let v = inner_product(&a, &b).unwrap();
        assert!(close(v.re, 2f64.powf(-0.5), 1e-14));
    }

    #[test]
    fn gaussian_closed_form_matches_quadrature() {
        let a = SpectralMode::gaussian_with_phase(0.4, 1.0, 0.3).unwrap();
        let b = SpectralMode::gaussian_with_phase(-0.2, 1.4, -1.1).unwrap();
        let grid = Arc::new(Grid::default_for(0.0, 1.4).unwrap());
        let sa = SpectralMode::Sampled {
            grid: grid.clone(),
            amplitudes: a.sample_on(&grid),
        };
        let sb = SpectralMode::Sampled {
            grid: grid.clone(),
            amplitudes: b.sample_on(&grid),
        };
        let exact = inner_product(&a, &b).unwrap();
        let quad = inner_product(&sa, &sb).unwrap();
        assert!((exact - quad).norm() < 1e-8, "{exact} vs {quad}");
        let mixed = inner_product(&a, &sb).unwrap();
        assert!((exact - mixed).norm() < 1e-8);
    }

    #[test]
    fn disjoint_supports_are_orthogonal() {
        let grid = Arc::new(Grid::uniform(0.0, 10.0, 101).unwrap());
        let left: Vec<Complex64> = grid
            .omega()
            .iter()
            .map(|&w| Complex64::new(if w < 4.0 { 1.0 } else { 0.0 }, 0.0))
            .collect();
        let right: Vec<Complex64> = grid
            .omega()
            .iter()
            .map(|&w| Complex64::new(0.0, if w > 6.0 { 1.0 } else { 0.0 }))
            .collect();
        let a = SpectralMode::sampled_normalized(grid.clone(), left).unwrap();
        let b = SpectralMode::sampled_normalized(grid, right).unwrap();
        assert_eq!(inner_product(&a, &b).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn different_grids_are_rejected() {
        let g1 = Arc::new(Grid::uniform(-5.0, 5.0, 101).unwrap());
        let g2 = Arc::new(Grid::uniform(-5.0, 5.0, 103).unwrap());
        let a = SpectralMode::sampled_normalized(g1.clone(), g_on(&g1, 0.0, 1.0)).unwrap();
        let b = SpectralMode::sampled_normalized(g2.clone(), g_on(&g2, 0.0, 1.0)).unwrap();
        assert_eq!(inner_product(&a, &b), Err(SpectralError::GridMismatch));
        // equal contents behind different allocations are compatible
        let g3 = Arc::new(Grid::uniform(-5.0, 5.0, 101).unwrap());
        let c = SpectralMode::sampled_normalized(g3.clone(), g_on(&g3, 0.5, 1.0)).unwrap();
        assert!(inner_product(&a, &c).is_ok());
    }

    #[test]
    fn invalid_inputs() {
        assert!(SpectralMode::gaussian(0.0, 0.0).is_err());
        assert_eq!(
            Grid::from_points(vec![0.0, 1.0, 1.0]),
            Err(SpectralError::InvalidGrid)
        );
        let grid = Arc::new(Grid::uniform(0.0, 1.0, 11).unwrap());
        let amps = vec![Complex64::new(2.0, 0.0); 11];
        assert!(matches!(
            SpectralMode::sampled(grid, amps),
            Err(SpectralError::NotNormalized(_))
        ));
    }

    #[test]
    fn interpolated_amplitude() {
        let grid = Arc::new(Grid::uniform(0.0, 1.0, 3).unwrap());
        let amps = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let m = SpectralMode::sampled_normalized(grid, amps).unwrap();
        let mid = m.amplitude(0.75);
        let top = m.amplitude(0.5);
        assert!((mid.re - 0.5 * top.re).abs() < 1e-15);
        assert_eq!(m.amplitude(2.0), Complex64::new(0.0, 0.0));
    }
}
