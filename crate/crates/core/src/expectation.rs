use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use qsd_spectral::ModeDecomposition;

use crate::DensityElements;

/// Detector expectation values in the coherent states reaching D3
/// (`|δ;ξ⟩`, `δ = α/√2`) and D2 (`|λ;ξ⟩`, `λ = iα/√2`) for mode-resolving
/// detectors, with `ĉ(ζ_j)` inserted where the photon may exit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectationTable {
    /// `⟨δ;ξ|Π₀|δ;ξ⟩`
    pub no_click: f64,
    /// `⟨λ;ξ|Π₁|λ;ξ⟩`
    pub one_click: f64,
    /// `⟨δ;ξ|ĉ₃(ζ)Π₀|δ;ξ⟩`
    pub c3_no_click: Complex64,
    /// `⟨λ;ξ|ĉ₂(ζ)Π₁|λ;ξ⟩`
    pub c2_one_click: Complex64,
    /// `⟨δ;ξ|ĉ₃(ζ)Π₀ĉ₃†(ζ)|δ;ξ⟩`
    pub c3_no_click_c3dag: f64,
    /// `⟨λ;ξ|ĉ₂(ζ)Π₁ĉ₂†(ζ)|λ;ξ⟩`
    pub c2_one_click_c2dag: f64,
}

/// Table for photon component `j`. `eta2` and `eta3` are the efficiencies
/// of D2 and D3; the two coincide in the symmetric device.
pub fn expectation_table(
    decomp: &ModeDecomposition,
    j: usize,
    alpha: Complex64,
    eta2: f64,
    eta3: f64,
) -> ExpectationTable {
    let kappa = decomp.kappa;
    let comp = &decomp.components[j];
    let (chi, ups) = (comp.chi, comp.upsilon);
    let ak2 = (alpha * kappa).norm_sqr();
    let e2 = (-eta2 * ak2 / 2.0).exp();
    let e3 = (-eta3 * ak2 / 2.0).exp();
    let i = Complex64::new(0.0, 1.0);
    let chi2 = chi.norm_sqr();
    let shift = |eta: f64| ups - kappa * chi.conj() * eta;

    let c2_one_click_c2dag = 0.25
        * eta2
        * (2.0 * chi2 * (2.0 - (alpha * ups).norm_sqr() - 3.0 * eta2 * ak2)
            + alpha.norm_sqr()
                * (2.0 * (kappa + chi * ups).norm_sqr()
                    + (alpha * kappa * shift(eta2)).norm_sqr()))
        * e2;

    ExpectationTable {
        no_click: e3,
        one_click: 0.5 * eta2 * ak2 * e2,
        c3_no_click: alpha * shift(eta3) * (e3 / SQRT_2),
        c2_one_click: i * eta2 * alpha / (2.0 * SQRT_2)
            * (2.0 * kappa * chi.conj() + ak2 * shift(eta2))
            * e2,
        c3_no_click_c3dag: 0.5
            * (2.0 * (1.0 - eta3 * chi2) + (alpha * shift(eta3)).norm_sqr())
            * e3,
        c2_one_click_c2dag,
    }
}

/// Unnormalized output elements for component `j`, assembled from the
/// expectation table. `P₁₀ = Σ_j p_j (d₀₀ + d₁₁)`.
pub fn density_elements(
    decomp: &ModeDecomposition,
    j: usize,
    alpha: Complex64,
    eta2: f64,
    eta3: f64,
) -> DensityElements {
    let t = expectation_table(decomp, j, alpha, eta2, eta3);
    let i = Complex64::new(0.0, 1.0);
    let d00 = 0.25 * t.c2_one_click_c2dag * t.no_click
        + 0.25 * t.one_click * t.c3_no_click_c3dag
        + i / 4.0 * t.c2_one_click * t.c3_no_click.conj()
        - i / 4.0 * t.c2_one_click.conj() * t.c3_no_click;
    let d01 = -t.one_click * t.c3_no_click.conj() / (2.0 * SQRT_2)
        + i / (2.0 * SQRT_2) * t.c2_one_click.conj() * t.no_click;
    DensityElements {
        d00: d00.re,
        d01,
        d11: 0.5 * t.one_click * t.no_click,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn decomp(kappa: Complex64, chi: Complex64, comp: Complex64) -> ModeDecomposition {
        let mu = (1.0 - kappa.norm_sqr()).sqrt();
        let xi_perp = (1.0 - chi.norm_sqr()).sqrt();
        let ups = kappa * chi.conj() + mu * xi_perp * comp;
        ModeDecomposition::from_overlaps(kappa, &[(1.0, chi, ups)]).unwrap()
    }

    #[test]
    fn dark_input() {
        let d = decomp(c(0.6, 0.2), c(0.3, -0.4), c(0.1, 0.5));
        let t = expectation_table(&d, 0, c(0.0, 0.0), 0.7, 0.7);
        assert_eq!(t.no_click, 1.0);
        assert_eq!(t.one_click, 0.0);
    }

    #[test]
    fn matched_no_click() {
        let d = decomp(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let t = expectation_table(&d, 0, c(2f64.sqrt(), 0.0), 1.0, 1.0);
        assert!((t.no_click - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn assembly_matches_compact_form() {
        let d = decomp(c(0.5, 0.3), c(-0.2, 0.6), c(0.4, -0.3));
        let alpha = c(0.9, -0.4);
        let eta = 0.65;
        let el = density_elements(&d, 0, alpha, eta, eta);
        let comp = d.components[0];
        let ak2 = (alpha * d.kappa).norm_sqr();
        let scale = eta / 4.0 * (-eta * ak2).exp();
        let chi2 = comp.chi.norm_sqr();
        assert!((el.d00 - scale * (ak2 * (1.0 - eta * chi2) + chi2)).abs() < 1e-14);
        assert!((el.d01 - scale * d.kappa.conj() * alpha.conj() * comp.chi).norm() < 1e-14);
        assert!((el.d11 - scale * ak2).abs() < 1e-14);
    }
}
