use nalgebra::DMatrix;
use num_complex::Complex64;
use qsd_fock::DetectorKind;
use qsd_spectral::{decompose, inner_product, ModeDecomposition, SpectralMode};

use crate::{density_elements, CoreError, QsdInput, Result};

/// Unnormalized output elements of one photon component `ζ_j`:
/// `d₀₀|0⟩⟨0| + d₀₁|0⟩⟨1;ζ_j| + d₁₀|1;ζ_j⟩⟨0| + d₁₁|1;ζ_j⟩⟨1;ζ_j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityElements {
    pub d00: f64,
    pub d01: Complex64,
    pub d11: f64,
}

impl DensityElements {
    pub fn d10(&self) -> Complex64 {
        self.d01.conj()
    }

    fn scaled(self, s: f64) -> Self {
        Self {
            d00: self.d00 * s,
            d01: self.d01 * s,
            d11: self.d11 * s,
        }
    }
}

/// `Γ_χ = Σp_j|χ_j|²`, `Γ_Υ = Σp_j|Υ_j|²`, `Γ_m = Σp_j Re(κ*Υ_jχ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregates {
    pub gamma_chi: f64,
    pub gamma_upsilon: f64,
    pub gamma_m: f64,
}

impl Aggregates {
    pub fn of(decomp: &ModeDecomposition) -> Self {
        let mut a = Self {
            gamma_chi: 0.0,
            gamma_upsilon: 0.0,
            gamma_m: 0.0,
        };
        for c in &decomp.components {
            a.gamma_chi += c.p * c.chi.norm_sqr();
            a.gamma_upsilon += c.p * c.upsilon.norm_sqr();
            a.gamma_m += c.p * (decomp.kappa.conj() * c.upsilon * c.chi).re;
        }
        a
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationResult {
    pub alpha: Complex64,
    /// `(p_j, d^(j))`, with the family's common prefactor included so that
    /// `P₁₀ = Σ_j p_j (d₀₀ + d₁₁)`.
    pub components: Vec<(f64, DensityElements)>,
    /// `Υ_j = (ζ_j, ξ)`
    pub upsilon: Vec<Complex64>,
    pub p10: f64,
    pub fidelity: f64,
    /// The family's normalization constant (`𝒩₀`, `𝒩₃` or `𝒩₄`); equal to
    /// `P₁₀` when the detectors differ in efficiency.
    pub normalizer: f64,
    /// Set for mode-resolving detectors.
    pub aggregates: Option<Aggregates>,
    /// `x = exp(−η|α|²/2)`, set for on/off detectors.
    pub x: Option<f64>,
}

impl TruncationResult {
    fn assemble(
        alpha: Complex64,
        components: Vec<(f64, DensityElements)>,
        upsilon: Vec<Complex64>,
        normalizer: f64,
    ) -> Result<Self> {
        let p10: f64 = components.iter().map(|(p, d)| p * (d.d00 + d.d11)).sum();
        if !(p10 > f64::MIN_POSITIVE) {
            return Err(CoreError::ZeroProbability);
        }
        let fidelity = fidelity_general(&components, alpha, &upsilon)?;
        Ok(Self {
            alpha,
            components,
            upsilon,
            p10,
            fidelity,
            normalizer,
            aggregates: None,
            x: None,
        })
    }

    /// `⟨0|ρ_out|0⟩` and the total one-photon weight.
    pub fn populations(&self) -> (f64, f64) {
        let p0: f64 = self.components.iter().map(|(p, d)| p * d.d00).sum();
        let p1: f64 = self.components.iter().map(|(p, d)| p * d.d11).sum();
        (p0 / self.p10, p1 / self.p10)
    }

    /// `⟨0|ρ_out|1;ξ⟩`
    pub fn coherence(&self) -> Complex64 {
        self.components
            .iter()
            .zip(&self.upsilon)
            .map(|((p, d), u)| d.d01 * u * *p)
            .sum::<Complex64>()
            / self.p10
    }

    /// `ρ_out` in the basis `{|0⟩, |1;e_k⟩}` given the coordinates
    /// `ζ_j = Σ_k coords[j][k] e_k` of every photon component in an
    /// orthonormal frame.
    pub fn output_state(&self, coords: &[Vec<Complex64>]) -> Result<DMatrix<Complex64>> {
        if coords.len() != self.components.len() {
            return Err(CoreError::InvalidParameter(format!(
                "{} coordinate vectors for {} components",
                coords.len(),
                self.components.len()
            )));
        }
        let dim = coords.iter().map(Vec::len).max().unwrap_or(0);
        let mut rho = DMatrix::<Complex64>::zeros(1 + dim, 1 + dim);
        for ((p, d), c) in self.components.iter().zip(coords) {
            let w = p / self.p10;
            rho[(0, 0)] += d.d00 * w;
            for (k, ck) in c.iter().enumerate() {
                rho[(0, 1 + k)] += d.d01 * ck.conj() * w;
                rho[(1 + k, 0)] += d.d10() * ck * w;
                for (l, cl) in c.iter().enumerate() {
                    rho[(1 + k, 1 + l)] += ck * cl.conj() * (d.d11 * w);
                }
            }
        }
        Ok(rho)
    }
}

/// `F = Σp_j[d₀₀ + 2Re(αΥ_j d₀₁) + d₁₁|αΥ_j|²] / [(1+|α|²) Σp_j(d₀₀+d₁₁)]`.
pub fn fidelity_general(
    components: &[(f64, DensityElements)],
    alpha: Complex64,
    upsilon: &[Complex64],
) -> Result<f64> {
    if components.len() != upsilon.len() {
        return Err(CoreError::InvalidParameter(format!(
            "{} components but {} overlaps",
            components.len(),
            upsilon.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for ((p, d), u) in components.iter().zip(upsilon) {
        num += p * (d.d00 + 2.0 * (alpha * u * d.d01).re + d.d11 * (alpha * u).norm_sqr());
        den += p * (d.d00 + d.d11);
    }
    den *= 1.0 + alpha.norm_sqr();
    if !(den > f64::MIN_POSITIVE) {
        return Err(CoreError::Degenerate);
    }
    // rounding can leave the ratio a few ulps outside [0, 1]
    Ok((num / den).clamp(0.0, 1.0))
}

/// Mode-resolving number-resolving detectors, from the decomposition of the
/// photon and coherent modes against the resolved mode `ϱ`.
pub fn mode_resolving_from_decomposition(
    decomp: &ModeDecomposition,
    alpha: Complex64,
    eta2: f64,
    eta3: f64,
) -> Result<TruncationResult> {
    let agg = Aggregates::of(decomp);
    let upsilon: Vec<_> = decomp.components.iter().map(|c| c.upsilon).collect();
    let ak2 = (alpha * decomp.kappa).norm_sqr();

    let mut result = if eta2 == eta3 {
        let eta = eta2;
        let s = eta / 4.0 * (-eta * ak2).exp();
        let components = decomp
            .components
            .iter()
            .map(|c| {
                let chi2 = c.chi.norm_sqr();
                let d = DensityElements {
                    d00: ak2 * (1.0 - eta * chi2) + chi2,
                    d01: decomp.kappa.conj() * alpha.conj() * c.chi,
                    d11: ak2,
                };
                (c.p, d.scaled(s))
            })
            .collect();
        let normalizer = (1.0 - eta * ak2) * agg.gamma_chi + 2.0 * ak2;
        let mut r = TruncationResult::assemble(alpha, components, upsilon, normalizer)?;
        let a = alpha.norm_sqr();
        let den = (1.0 + a) * normalizer;
        if den > f64::MIN_POSITIVE {
            r.fidelity = (((1.0 - eta * ak2) * agg.gamma_chi
                + a * ak2 * agg.gamma_upsilon
                + 2.0 * a * agg.gamma_m
                + ak2)
                / den)
                .clamp(0.0, 1.0);
        }
        r
    } else {
        let components = decomp
            .components
            .iter()
            .enumerate()
            .map(|(j, c)| (c.p, density_elements(decomp, j, alpha, eta2, eta3)))
            .collect::<Vec<_>>();
        let p10 = components.iter().map(|(p, d)| p * (d.d00 + d.d11)).sum();
        TruncationResult::assemble(alpha, components, upsilon, p10)?
    };
    result.aggregates = Some(agg);
    Ok(result)
}

/// Mode-unresolving number-resolving detectors. Each component is
/// `(p_j, Υ_j)`.
pub fn mode_unresolving_from_overlaps(
    components: &[(f64, Complex64)],
    alpha: Complex64,
    eta: f64,
) -> Result<TruncationResult> {
    let a = alpha.norm_sqr();
    let s = eta / 4.0 * (-eta * a).exp();
    let elements = components
        .iter()
        .map(|&(p, u)| {
            let d = DensityElements {
                d00: 1.0 + a * (1.0 - eta),
                d01: alpha.conj() * u.conj(),
                d11: a,
            };
            (p, d.scaled(s))
        })
        .collect();
    let upsilon = components.iter().map(|c| c.1).collect();
    let normalizer = 1.0 + a * (2.0 - eta);
    let mut r = TruncationResult::assemble(alpha, elements, upsilon, normalizer)?;
    r.fidelity = fidelity_mode_unresolving(a, gamma0_sq(components), eta)?.clamp(0.0, 1.0);
    Ok(r)
}

/// Conventional on/off detectors. Each component is `(p_j, Υ_j)`.
pub fn conventional_from_overlaps(
    components: &[(f64, Complex64)],
    alpha: Complex64,
    eta: f64,
) -> Result<TruncationResult> {
    let a = alpha.norm_sqr();
    let x = (-eta * a / 2.0).exp();
    let elements = components
        .iter()
        .map(|&(p, u)| {
            let d = DensityElements {
                d00: 2.0 * (2.0 - eta) + (alpha * u * eta).norm_sqr() - 4.0 * x * (1.0 - eta),
                d01: alpha.conj() * u.conj() * (2.0 * eta),
                d11: 4.0 * (1.0 - x),
            };
            (p, d.scaled(x / 8.0))
        })
        .collect();
    let upsilon = components.iter().map(|c| c.1).collect();
    let normalizer = components
        .iter()
        .map(|&(p, u)| {
            p * (2.0 * (4.0 * (1.0 - x) + eta * (2.0 * x - 1.0)) + (alpha * u * eta).norm_sqr())
        })
        .sum();
    let mut r = TruncationResult::assemble(alpha, elements, upsilon, normalizer)?;
    r.fidelity = fidelity_conventional(a, gamma0_sq(components), eta)?.clamp(0.0, 1.0);
    r.x = Some(x);
    Ok(r)
}

fn gamma0_sq(components: &[(f64, Complex64)]) -> f64 {
    components.iter().map(|(p, u)| p * u.norm_sqr()).sum()
}

fn upsilons(input: &QsdInput) -> Result<Vec<(f64, Complex64)>> {
    input
        .source
        .components()
        .iter()
        .map(|(p, zeta)| Ok((*p, inner_product(zeta, &input.xi)?)))
        .collect()
}

pub fn truncate_mode_resolving(input: &QsdInput, rho: &SpectralMode) -> Result<TruncationResult> {
    input.check_kinds()?;
    match &input.d2.kind {
        DetectorKind::NumberResolvingModeResolving(m) if m == rho => {}
        other => {
            return Err(CoreError::InvalidParameter(format!(
                "{} detectors do not resolve the given mode",
                other.name()
            )))
        }
    }
    let decomp = decompose(input.source.components(), &input.xi, rho)?;
    mode_resolving_from_decomposition(&decomp, input.alpha, input.d2.eta, input.d3.eta)
}

pub fn truncate_mode_unresolving(input: &QsdInput) -> Result<TruncationResult> {
    let eta = input.shared_eta()?;
    if input.d2.kind != DetectorKind::NumberResolvingModeUnresolving {
        return Err(CoreError::InvalidParameter(format!(
            "{} detectors",
            input.d2.kind.name()
        )));
    }
    mode_unresolving_from_overlaps(&upsilons(input)?, input.alpha, eta)
}

pub fn truncate_conventional(input: &QsdInput) -> Result<TruncationResult> {
    let eta = input.shared_eta()?;
    if input.d2.kind != DetectorKind::ConventionalOnOff {
        return Err(CoreError::InvalidParameter(format!(
            "{} detectors",
            input.d2.kind.name()
        )));
    }
    conventional_from_overlaps(&upsilons(input)?, input.alpha, eta)
}

/// Dispatches on the detector kind.
pub fn truncate(input: &QsdInput) -> Result<TruncationResult> {
    input.check_kinds()?;
    match &input.d2.kind {
        DetectorKind::NumberResolvingModeResolving(rho) => truncate_mode_resolving(input, rho),
        DetectorKind::NumberResolvingModeUnresolving => truncate_mode_unresolving(input),
        DetectorKind::ConventionalOnOff => truncate_conventional(input),
    }
}

/// Mode-unresolving detectors:
/// `F = 1 − a[2 + a(2−η) − γ(2+a)] / ((1+a)(1+a(2−η)))`, `a = |α|²`, `γ = |γ₀|²`.
pub fn fidelity_mode_unresolving(alpha_sq: f64, gamma0_sq: f64, eta: f64) -> Result<f64> {
    let a = alpha_sq;
    let n3 = 1.0 + a * (2.0 - eta);
    let den = (1.0 + a) * n3;
    if !(den > f64::MIN_POSITIVE) {
        return Err(CoreError::Degenerate);
    }
    Ok(1.0 - a * (2.0 + a * (2.0 - eta) - gamma0_sq * (2.0 + a)) / den)
}

/// Conventional on/off detectors.
pub fn fidelity_conventional(alpha_sq: f64, gamma0_sq: f64, eta: f64) -> Result<f64> {
    let a = alpha_sq;
    let x = (-eta * a / 2.0).exp();
    let n4 = 2.0 * (4.0 * (1.0 - x) + eta * (2.0 * x - 1.0)) + eta * eta * a * gamma0_sq;
    let den = (1.0 + a) * n4;
    if !(den > f64::MIN_POSITIVE) {
        return Err(CoreError::Degenerate);
    }
    let num = 4.0 * (1.0 - x)
        + a * (2.0 * (4.0 - eta) - 4.0 * x * (2.0 - eta)
            + gamma0_sq * (a * eta * eta - 4.0 * (1.0 - x + eta)));
    Ok(1.0 - num / den)
}

/// Mode-resolving detectors matched to the coherent pulse (`ϱ = ξ`).
pub fn fidelity_resolving_coherent_mode(alpha_sq: f64, gamma0_sq: f64, eta: f64) -> Result<f64> {
    let a = alpha_sq;
    let g = gamma0_sq;
    let den = 2.0 * a + g * (1.0 - eta * a);
    if !(den.abs() > f64::MIN_POSITIVE) {
        return Err(CoreError::Degenerate);
    }
    Ok(1.0 - a / (1.0 + a) * ((1.0 + 2.0 * a) - g * (1.0 + a * (1.0 + eta))) / den)
}

/// Mode-resolving detectors matched to a pure photon (`ϱ = ζ`), `η = 1`:
/// `F = 1 − |α|²|γ₁|²/(1+|α|²)`.
pub fn fidelity_resolving_photon_mode_ideal(alpha_sq: f64, gamma1_sq: f64) -> f64 {
    1.0 - alpha_sq * gamma1_sq / (1.0 + alpha_sq)
}
