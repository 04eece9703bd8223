use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Grid, ModeMatch, Result, SpectralError, SpectralMode};

/// Real Gaussian correlation kernel
/// `K(ω,ω') = s·exp(-A[(ω-c)² + (ω'-c)²] - a(ω-ω')²)` with `A > 0`, `a ≥ 0`.
///
/// Covers the coherent-pulse kernel (`a = 0`, rank one), the heralded SPDC
/// signal kernel, and both after Gaussian filtering. `a ≥ 0` makes the kernel
/// positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianKernel {
    pub center: f64,
    pub diag: f64,
    pub corr: f64,
    pub scale: f64,
}

impl GaussianKernel {
    /// Unit-trace kernel.
    pub fn new(center: f64, diag: f64, corr: f64) -> Result<Self> {
        if !(diag > 0.0) || !(corr >= 0.0) || !diag.is_finite() || !corr.is_finite() {
            return Err(SpectralError::InvalidParameter(format!(
                "gaussian kernel needs diag > 0 and corr >= 0 (got {diag}, {corr})"
            )));
        }
        Ok(Self {
            center,
            diag,
            corr,
            scale: (2.0 * diag / PI).sqrt(),
        })
    }

    pub fn value(&self, w1: f64, w2: f64) -> f64 {
        let x = w1 - self.center;
        let y = w2 - self.center;
        let d = w1 - w2;
        self.scale * (-self.diag * (x * x + y * y) - self.corr * d * d).exp()
    }

    pub fn trace(&self) -> f64 {
        self.scale * (PI / (2.0 * self.diag)).sqrt()
    }

    /// `∫∫ K₁(ω,ω') K₂(ω',ω) dω dω'`.
    pub fn overlap(&self, other: &Self) -> f64 {
        let a = self.diag + other.diag;
        let c = self.corr + other.corr;
        let shift = self.center - other.center;
        let offset = 2.0 * self.diag * other.diag / a * shift * shift;
        self.scale * other.scale * (-offset).exp() * PI / (a * (a + 2.0 * c)).sqrt()
    }

    /// Multiplies by `F(ω)F(ω')` with `F(ω) = exp(-(ω-ω_f)²/σ_f²)` and
    /// renormalizes to unit trace.
    pub fn filtered(&self, filter_center: f64, sigma_f: f64) -> Result<Self> {
        if !(sigma_f > 0.0) {
            return Err(SpectralError::InvalidParameter(format!(
                "filter width must be positive, got {sigma_f}"
            )));
        }
        let k = 1.0 / (sigma_f * sigma_f);
        let diag = self.diag + k;
        let center = (self.diag * self.center + k * filter_center) / diag;
        Self::new(center, diag, self.corr)
    }
}

/// Kernel sampled on a grid, `matrix[(k, l)] = K(ω_k, ω_l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledKernel {
    pub grid: Arc<Grid>,
    pub matrix: DMatrix<Complex64>,
}

impl SampledKernel {
    pub fn trace(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .enumerate()
            .map(|(k, w)| w * self.matrix[(k, k)].re)
            .sum()
    }

    /// Quadrature of `∫∫ K₁(ω,ω') K₂(ω',ω)`. Grids must match.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        let w = self.grid.weights();
        let n = w.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for l in 0..n {
                row += self.matrix[(k, l)] * other.matrix[(l, k)] * w[l];
            }
            acc += row * w[k];
        }
        Ok(acc.re)
    }

    /// `max |K(ω,ω') - conj K(ω',ω)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for l in k..n {
                worst = worst.max((self.matrix[(k, l)] - self.matrix[(l, k)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the quadrature-weighted operator `W^½ K W^½`,
    /// ascending. These approximate the kernel's eigenvalues as an integral
    /// operator; for a unit-trace kernel they sum to one.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sw: Vec<f64> = self.grid.weights().iter().map(|w| w.sqrt()).collect();
        let n = sw.len();
        let weighted = DMatrix::from_fn(n, n, |k, l| {
            let v = 0.5 * (self.matrix[(k, l)] + self.matrix[(l, k)].conj());
            v * (sw[k] * sw[l])
        });
        let mut ev: Vec<f64> = weighted.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

/// Two-frequency mode profile `g(ω,ω') = Σ_j p_j f_j(ω) f_j*(ω')`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeProfile {
    Gaussian(GaussianKernel),
    Sampled(SampledKernel),
}

impl ModeProfile {
    /// Rank-one profile of a pure mode.
    pub fn pure(mode: &SpectralMode, grid: Option<Arc<Grid>>) -> Result<Self> {
        match (mode, grid) {
            (SpectralMode::Gaussian { center, sigma, .. }, None) => Ok(ModeProfile::Gaussian(
                GaussianKernel::new(*center, 0.5 / (sigma * sigma), 0.0)?,
            )),
            (m, g) => Self::mixture(&[(1.0, m.clone())], g),
        }
    }

    /// Sampled profile of a mixture. Gaussian components are evaluated on
    /// `grid`, or on the grid of the first sampled component.
    pub fn mixture(components: &[(f64, SpectralMode)], grid: Option<Arc<Grid>>) -> Result<Self> {
        let grid = grid
            .or_else(|| components.iter().find_map(|(_, m)| m.grid().cloned()))
            .ok_or_else(|| {
                SpectralError::InvalidParameter("mixture of gaussians needs a grid".into())
            })?;
        let n = grid.len();
        let mut matrix = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for (p, mode) in components {
            let f = match mode {
                SpectralMode::Sampled {
                    grid: g,
                    amplitudes,
                } => {
                    if **g != *grid {
                        return Err(SpectralError::GridMismatch);
                    }
                    amplitudes.clone()
                }
                g @ SpectralMode::Gaussian { .. } => g.sample_on(&grid),
            };
            for k in 0..n {
                for l in 0..n {
                    matrix[(k, l)] += f[k] * f[l].conj() * *p;
                }
            }
        }
        Ok(ModeProfile::Sampled(SampledKernel { grid, matrix }))
    }

    pub fn trace(&self) -> f64 {
        match self {
            ModeProfile::Gaussian(g) => g.trace(),
            ModeProfile::Sampled(s) => s.trace(),
        }
    }

    pub fn sample(&self, grid: Arc<Grid>) -> SampledKernel {
        match self {
            ModeProfile::Gaussian(g) => {
                let w = grid.omega();
                let matrix = DMatrix::from_fn(w.len(), w.len(), |k, l| {
                    Complex64::new(g.value(w[k], w[l]), 0.0)
                });
                SampledKernel { grid, matrix }
            }
            ModeProfile::Sampled(s) if s.grid == grid => s.clone(),
            ModeProfile::Sampled(s) => {
                // bilinear resampling
                let src = s.grid.omega();
                let interp = |w: f64| -> Option<(usize, f64)> {
                    if w < src[0] || w > src[src.len() - 1] {
                        return None;
                    }
                    let k = src.partition_point(|&x| x <= w).clamp(1, src.len() - 1);
                    Some((k, (w - src[k - 1]) / (src[k] - src[k - 1])))
                };
                let w = grid.omega();
                let idx: Vec<_> = w.iter().map(|&x| interp(x)).collect();
                let matrix = DMatrix::from_fn(w.len(), w.len(), |a, b| match (idx[a], idx[b]) {
                    (Some((k, t)), Some((l, u))) => {
                        let m = &s.matrix;
                        m[(k - 1, l - 1)] * ((1.0 - t) * (1.0 - u))
                            + m[(k - 1, l)] * ((1.0 - t) * u)
                            + m[(k, l - 1)] * (t * (1.0 - u))
                            + m[(k, l)] * (t * u)
                    }
                    _ => Complex64::new(0.0, 0.0),
                });
                SampledKernel { grid, matrix }
            }
        }
    }

    /// `Tr(K²)/Tr(K)²`; one for a pure mode.
    pub fn purity(&self) -> Result<f64> {
        Ok(mode_match_profiles(self, self)?.gamma0_sq)
    }
}

/// Normalized kernel overlap
/// `|γ₀|² = ∫∫ ξ(ω,ω')ζ(ω',ω) / (∫ξ(ω,ω) · ∫ζ(ω,ω))`, clamped to `[0, 1]`.
///
/// For pure modes this is `|(ξ, ζ)|²`; for a mixed photon it is
/// `Σ_j p_j |(ξ, ζ_j)|²`.
pub fn mode_match_profiles(xi: &ModeProfile, zeta: &ModeProfile) -> Result<ModeMatch> {
    let (num, tx, tz) = match (xi, zeta) {
        (ModeProfile::Gaussian(a), ModeProfile::Gaussian(b)) => {
            (a.overlap(b), a.trace(), b.trace())
        }
        (ModeProfile::Sampled(a), ModeProfile::Sampled(b)) => (a.overlap(b)?, a.trace(), b.trace()),
        (ModeProfile::Sampled(a), b @ ModeProfile::Gaussian(_)) => {
            let b = b.sample(a.grid.clone());
            (a.overlap(&b)?, a.trace(), b.trace())
        }
        (a @ ModeProfile::Gaussian(_), ModeProfile::Sampled(b)) => {
            let a = a.sample(b.grid.clone());
            (a.overlap(b)?, a.trace(), b.trace())
        }
    };
    if !(tx > 0.0) || !(tz > 0.0) {
        return Err(SpectralError::DegenerateProfile);
    }
    Ok(ModeMatch::from_gamma0_sq(num / (tx * tz)))
}
