//! Brute-force reference for the quantum-scissors device.
//!
//! Each photon component `ζ_j` is evolved through both beam splitters as an
//! explicit truncated Fock-space vector together with the coherent pulse,
//! conditioned on the detector POVMs at `c₂`/`c₃` and reduced to port `b₁`.
//! The components are then mixed with weights `p_j`. Nothing here uses the
//! closed-form expressions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use qsd_fock::{
    apply_beamsplitter, coherent_state, conditional_state_pure, cutoff_for, single_photon_state,
    BeamSplitter, DetectorKind, DetectorSpec, FockError, FockVector, ModeIndex, Occupation, Port,
};
use qsd_spectral::{
    gram_matrix, gram_schmidt_from_gram, PhotonSource, SpectralError, SpectralMode,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("heralding probability underflow ({0:e})")]
    Underflow(f64),
    #[error("detectors D2 and D3 are of different kinds")]
    MixedDetectors,
    #[error("local spectral basis needs {0} modes")]
    BasisTooLarge(usize),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OracleOptions {
    /// Photon-number cutoff of the coherent pulse; chosen from the Poisson
    /// tail when absent.
    pub cutoff: Option<usize>,
    /// Conjugates the reflection phase of the second beam splitter.
    pub flip_bs2_phase: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub p10: f64,
    /// `ρ_out` on `{|0⟩, |1;g_k⟩}` for an orthonormal frame `g_k`.
    pub rho_out: DMatrix<Complex64>,
    /// Coordinates of each photon mode `ζ_j` in the frame `g_k`.
    pub photon_coords: Vec<Vec<Complex64>>,
    /// Conditioned weight at `b₁` outside the vacuum/one-photon sector.
    pub leakage: f64,
    pub fidelity: f64,
    /// Coherent-pulse cutoff actually used.
    pub cutoff: usize,
}

/// Runs the device for photon source `source`, coherent pulse `|α;ξ⟩` and
/// detectors `d2` (must click) and `d3` (must not).
pub fn simulate_qsd(
    source: &PhotonSource,
    xi: &SpectralMode,
    alpha: Complex64,
    d2: &DetectorSpec,
    d3: &DetectorSpec,
    options: OracleOptions,
) -> Result<OracleReport> {
    let resolved = resolved_mode(d2, d3)?;
    let cutoff = match options.cutoff {
        Some(n) => n,
        None => cutoff_for(alpha.norm_sqr(), 0)?,
    };

    // global frame: [ϱ?, ξ, ζ_1, ..., ζ_n]
    let mut modes: Vec<SpectralMode> = resolved.iter().cloned().collect();
    let xi_at = modes.len();
    modes.push(xi.clone());
    let zeta_at = modes.len();
    modes.extend(source.components().iter().map(|(_, z)| z.clone()));
    let gram = gram_matrix(&modes)?;
    let global = gram_schmidt_from_gram(&gram);
    let dim = global.dim();

    let bs1 = BeamSplitter::new((Port::A1, Port::A2), (Port::B1, Port::B2));
    let mut bs2 = BeamSplitter::new((Port::B3, Port::B2), (Port::C3, Port::C2));
    if options.flip_bs2_phase {
        bs2 = bs2.conjugate_phase();
    }
    let povms = [d2.click(Port::C2), d3.no_click(Port::C3)];

    let mut acc = DMatrix::<Complex64>::zeros(1 + dim, 1 + dim);
    let mut p10 = 0.0;
    let mut leakage = 0.0;
    for (j, (p, _)) in source.components().iter().enumerate() {
        // local frame: [ϱ?, ξ, ζ_j], resolved mode first
        let mut idx: Vec<usize> = (0..xi_at).collect();
        idx.push(xi_at);
        idx.push(zeta_at + j);
        let sub: Vec<Vec<Complex64>> = idx
            .iter()
            .map(|&a| idx.iter().map(|&b| gram[a][b]).collect())
            .collect();
        let local = gram_schmidt_from_gram(&sub);
        if local.dim() > qsd_fock::SPECTRAL_SLOTS {
            return Err(OracleError::BasisTooLarge(local.dim()));
        }
        let xi_loc = local.coords(xi_at).to_vec();
        let zeta_loc = local.coords(idx.len() - 1).to_vec();

        let photon = single_photon_state(Port::A1, &zeta_loc)?;
        let pulse = coherent_state(Port::B3, &xi_loc, alpha, cutoff)?;
        let state = photon.tensor(&pulse)?;
        let state = apply_beamsplitter(&apply_beamsplitter(&state, &bs1), &bs2);
        let (rho_b1, pj) = match conditional_state_pure(&state, &povms, &[Port::B1]) {
            Ok(r) => r,
            Err(FockError::ZeroProbability(_)) => continue,
            Err(e) => return Err(e.into()),
        };

        // local e_k in the global frame: T[g][k] = Σ_i basis[k][i] (g_g, m_idx(i))
        let t: Vec<Vec<Complex64>> = (0..dim)
            .map(|g| {
                (0..local.dim())
                    .map(|k| {
                        (0..idx.len())
                            .map(|i| local.basis[k][i] * global.coeffs[idx[i]][g])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let sector = |o: Occupation| -> Option<Vec<Complex64>> {
            if o == Occupation::VACUUM {
                let mut v = vec![Complex64::new(0.0, 0.0); 1 + dim];
                v[0] = Complex64::new(1.0, 0.0);
                return Some(v);
            }
            if o.port_total(Port::B1) != 1 {
                return None;
            }
            let k = (0..local.dim()).find(|&k| o.get(ModeIndex::new(Port::B1, k)) == 1)?;
            let mut v = vec![Complex64::new(0.0, 0.0); 1 + dim];
            for g in 0..dim {
                v[1 + g] = t[g][k];
            }
            Some(v)
        };
        let w = p * pj;
        for ((a, b), v) in rho_b1.iter() {
            match (sector(a), sector(b)) {
                (Some(va), Some(vb)) => {
                    for r in 0..=dim {
                        for c in 0..=dim {
                            acc[(r, c)] += va[r] * vb[c].conj() * v * w;
                        }
                    }
                }
                _ if a == b => leakage += v.re * w,
                _ => {}
            }
        }
        p10 += w;
    }
    if !(p10 > 1e-300) {
        return Err(OracleError::Underflow(p10));
    }
    let rho_out = acc / Complex64::new(p10, 0.0);

    let mut phi = DMatrix::<Complex64>::zeros(1 + dim, 1);
    phi[(0, 0)] = Complex64::new(1.0, 0.0);
    for (g, c) in global.coords(xi_at).iter().enumerate() {
        phi[(1 + g, 0)] = alpha * c;
    }
    let phi = phi / Complex64::new((1.0 + alpha.norm_sqr()).sqrt(), 0.0);
    let fidelity = (phi.adjoint() * &rho_out * &phi)[(0, 0)].re;

    let photon_coords = (0..source.components().len())
        .map(|j| global.coords(zeta_at + j).to_vec())
        .collect();
    Ok(OracleReport {
        p10,
        rho_out,
        photon_coords,
        leakage: leakage / p10,
        fidelity,
        cutoff,
    })
}

fn resolved_mode(d2: &DetectorSpec, d3: &DetectorSpec) -> Result<Option<SpectralMode>> {
    if std::mem::discriminant(&d2.kind) != std::mem::discriminant(&d3.kind) {
        return Err(OracleError::MixedDetectors);
    }
    Ok(match (&d2.kind, &d3.kind) {
        (
            DetectorKind::NumberResolvingModeResolving(a),
            DetectorKind::NumberResolvingModeResolving(b),
        ) => {
            if a != b {
                return Err(OracleError::MixedDetectors);
            }
            Some(a.clone())
        }
        _ => None,
    })
}

/// `[⟨Π₀⟩, ⟨Π₁⟩, ⟨ĉ₃(ζ)Π₀⟩, ⟨ĉ₂(ζ)Π₁⟩, ⟨ĉ₃(ζ)Π₀ĉ₃†(ζ)⟩, ⟨ĉ₂(ζ)Π₁ĉ₂†(ζ)⟩]`
/// taken directly in `|α/√2;ξ⟩` at `c₃` and `|iα/√2;ξ⟩` at `c₂`, with
/// mode-resolving detectors counting `ϱ`.
pub fn detector_expectations(
    rho: &SpectralMode,
    xi: &SpectralMode,
    zeta: &SpectralMode,
    alpha: Complex64,
    eta2: f64,
    eta3: f64,
) -> Result<[Complex64; 6]> {
    let gram = gram_matrix(&[rho.clone(), xi.clone(), zeta.clone()])?;
    let frame = gram_schmidt_from_gram(&gram);
    let xi_c = frame.coords(1).to_vec();
    let zeta_c = frame.coords(2).to_vec();
    let kind = DetectorKind::NumberResolvingModeResolving(rho.clone());
    let d2 = DetectorSpec::new(kind.clone(), eta2)?;
    let d3 = DetectorSpec::new(kind, eta3)?;
    let half = std::f64::consts::FRAC_1_SQRT_2;

    let delta = alpha * half;
    let lambda = alpha * Complex64::new(0.0, half);
    let cutoff = cutoff_for(alpha.norm_sqr() / 2.0, 0)?;
    let at_c3 = raise(&coherent_state(Port::C3, &xi_c, delta, cutoff)?, cutoff + 1);
    let at_c2 = raise(
        &coherent_state(Port::C2, &xi_c, lambda, cutoff)?,
        cutoff + 1,
    );
    let pi0 = d3.no_click(Port::C3);
    let pi1 = d2.click(Port::C2);

    let create = |s: &FockVector, port: Port| -> FockVector {
        let terms = zeta_c.iter().enumerate().flat_map(|(k, z)| {
            s.create(ModeIndex::new(port, k))
                .scaled(*z)
                .iter()
                .collect::<Vec<_>>()
        });
        FockVector::from_amplitudes(terms, s.cutoff())
    };
    let c3 = create(&at_c3, Port::C3);
    let c2 = create(&at_c2, Port::C2);
    let real = |x: f64| Complex64::new(x, 0.0);
    Ok([
        real(pi0.expectation(&at_c3)),
        real(pi1.expectation(&at_c2)),
        c3.inner(&pi0.apply(&at_c3)),
        c2.inner(&pi1.apply(&at_c2)),
        c3.inner(&pi0.apply(&c3)),
        c2.inner(&pi1.apply(&c2)),
    ])
}

fn raise(s: &FockVector, cutoff: usize) -> FockVector {
    FockVector::from_amplitudes(s.iter(), cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn gaussian(center: f64) -> SpectralMode {
        SpectralMode::gaussian(center, 1.0).unwrap()
    }

    fn spec(kind: DetectorKind, eta: f64) -> DetectorSpec {
        DetectorSpec::new(kind, eta).unwrap()
    }

    #[test]
    fn matched_unresolving_ideal() {
        let xi = gaussian(0.0);
        let d = spec(DetectorKind::NumberResolvingModeUnresolving, 1.0);
        let r = simulate_qsd(
            &PhotonSource::pure(xi.clone()),
            &xi,
            c(1.0, 0.0),
            &d,
            &d,
            OracleOptions::default(),
        )
        .unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-10);
        // η𝒩₃/4 · e^(−η|α|²) with 𝒩₃ = 1 + |α|²(2−η) = 2
        assert!((r.p10 - 0.5 * (-1.0f64).exp()).abs() < 1e-10);
        assert!(r.leakage < 1e-12);
    }

    #[test]
    fn conventional_complete_mismatch() {
        let xi = gaussian(0.0);
        let zeta = gaussian(60.0);
        let d = spec(DetectorKind::ConventionalOnOff, 1.0);
        let r = simulate_qsd(
            &PhotonSource::pure(zeta),
            &xi,
            c(1.0, 0.0),
            &d,
            &d,
            OracleOptions::default(),
        )
        .unwrap();
        assert!((r.rho_out[(0, 0)].re - 0.5596).abs() < 1e-4);
        let one: f64 = (1..r.rho_out.nrows()).map(|k| r.rho_out[(k, k)].re).sum();
        assert!((one - 0.4404).abs() < 1e-4);
    }

    #[test]
    fn resolving_photon_mode_dark_pulse_probability() {
        let xi = gaussian(0.0);
        let zeta = gaussian(60.0);
        for eta in [0.3, 1.0] {
            let d = spec(
                DetectorKind::NumberResolvingModeResolving(zeta.clone()),
                eta,
            );
            let r = simulate_qsd(
                &PhotonSource::pure(zeta.clone()),
                &xi,
                c(0.8, 0.3),
                &d,
                &d,
                OracleOptions::default(),
            )
            .unwrap();
            assert!((r.p10 - eta / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        let xi = gaussian(0.0);
        let source = PhotonSource::new(vec![(0.5, gaussian(0.4)), (0.5, gaussian(-0.9))]).unwrap();
        let d = spec(DetectorKind::ConventionalOnOff, 0.6);
        let alpha = c(1.1, -0.6);
        let base = simulate_qsd(&source, &xi, alpha, &d, &d, OracleOptions::default()).unwrap();
        let doubled = simulate_qsd(
            &source,
            &xi,
            alpha,
            &d,
            &d,
            OracleOptions {
                cutoff: Some(2 * base.cutoff),
                ..Default::default()
            },
        )
        .unwrap();
        assert!((base.p10 - doubled.p10).abs() < 1e-10);
        assert!((base.fidelity - doubled.fidelity).abs() < 1e-10);
        assert!((&base.rho_out - &doubled.rho_out).camax() < 1e-10);
    }

    #[test]
    fn output_state_is_physical() {
        let xi = gaussian(0.0);
        let rho = SpectralMode::gaussian_with_phase(0.2, 1.3, 0.4).unwrap();
        let source = PhotonSource::new(vec![
            (0.3, gaussian(0.7)),
            (
                0.7,
                SpectralMode::gaussian_with_phase(-0.5, 0.8, 1.1).unwrap(),
            ),
        ])
        .unwrap();
        let d = spec(DetectorKind::NumberResolvingModeResolving(rho), 1.0);
        let r = simulate_qsd(&source, &xi, c(0.9, 0.7), &d, &d, OracleOptions::default()).unwrap();
        assert!((r.rho_out.trace() - c(1.0, 0.0)).norm() < 1e-10);
        assert!((&r.rho_out - r.rho_out.adjoint()).camax() < 1e-12);
        let eig = r.rho_out.clone().symmetric_eigen().eigenvalues;
        assert!(eig.iter().all(|&l| l > -1e-10));
        assert!(r.leakage < 1e-12);
    }

    #[test]
    fn mixed_kinds_rejected() {
        let xi = gaussian(0.0);
        let a = spec(DetectorKind::ConventionalOnOff, 1.0);
        let b = spec(DetectorKind::NumberResolvingModeUnresolving, 1.0);
        assert_eq!(
            simulate_qsd(
                &PhotonSource::pure(xi.clone()),
                &xi,
                c(1.0, 0.0),
                &a,
                &b,
                OracleOptions::default()
            ),
            Err(OracleError::MixedDetectors)
        );
    }

    #[test]
    fn expectations_without_light() {
        let xi = gaussian(0.0);
        let t = detector_expectations(&gaussian(0.3), &xi, &gaussian(-0.2), c(0.0, 0.0), 0.7, 0.7)
            .unwrap();
        assert!((t[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(t[1].norm() < 1e-15);
    }
}
