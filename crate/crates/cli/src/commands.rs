use num_complex::Complex64;
use qsd_core::{
    conventional_from_overlaps, mode_resolving_from_decomposition, mode_unresolving_from_overlaps,
    optimize_alpha_closed, optimize_alpha_numeric, CoreError, PreparationModel, TruncationResult,
};
use qsd_spectral::spdc::{gamma0_lower_bound, SpdcChain};
use qsd_spectral::ModeDecomposition;
use rayon::prelude::*;

use crate::cloud::{compare_all, comparison_csv, CloudSpec};
use crate::config::Config;
use crate::format::{csv, g12};
use crate::CliError;

const NM: f64 = 1e-9;

/// Detector families reachable from scalar mode-match parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    Conventional,
    ModeUnresolving,
    /// Mode-resolving detectors matched to the coherent pulse.
    ResolvingCoherent,
    /// Mode-resolving detectors matched to a pure photon.
    ResolvingPhoton,
}

impl Detector {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "conventional" => Detector::Conventional,
            "mode-unresolving" => Detector::ModeUnresolving,
            "mode-resolving-coherent" => Detector::ResolvingCoherent,
            "mode-resolving-photon" => Detector::ResolvingPhoton,
            other => return Err(CliError::Usage(format!("unknown detector `{other}`"))),
        })
    }

    fn from_config(cfg: &Config, default: &str) -> Result<Self, CliError> {
        Self::parse(cfg.get("detector").unwrap_or(default))
    }

    /// Pure photon with real overlap `u = √γ₀²` against the pulse.
    pub fn truncate(
        self,
        gamma0_sq: f64,
        eta: f64,
        alpha_sq: f64,
    ) -> Result<TruncationResult, CoreError> {
        let u = Complex64::new(gamma0_sq.sqrt(), 0.0);
        let one = Complex64::new(1.0, 0.0);
        let alpha = Complex64::new(alpha_sq.sqrt(), 0.0);
        match self {
            Detector::Conventional => conventional_from_overlaps(&[(1.0, u)], alpha, eta),
            Detector::ModeUnresolving => mode_unresolving_from_overlaps(&[(1.0, u)], alpha, eta),
            Detector::ResolvingCoherent => {
                let d = ModeDecomposition::from_overlaps(one, &[(1.0, u, u)])?;
                mode_resolving_from_decomposition(&d, alpha, eta, eta)
            }
            Detector::ResolvingPhoton => {
                let d = ModeDecomposition::from_overlaps(u, &[(1.0, one, u)])?;
                mode_resolving_from_decomposition(&d, alpha, eta, eta)
            }
        }
    }

    pub fn preparation_model(self, gamma0_sq: f64, eta: f64) -> PreparationModel {
        let g = gamma0_sq;
        match self {
            Detector::Conventional => PreparationModel::Conventional { gamma0_sq: g, eta },
            Detector::ModeUnresolving => PreparationModel::ModeUnresolving { gamma0_sq: g, eta },
            Detector::ResolvingCoherent => PreparationModel::ModeResolving {
                kappa_sq: 1.0,
                gamma_chi: g,
                gamma_upsilon: g,
                gamma_m: g,
                eta,
            },
            Detector::ResolvingPhoton => PreparationModel::ModeResolving {
                kappa_sq: g,
                gamma_chi: 1.0,
                gamma_upsilon: g,
                gamma_m: g,
                eta,
            },
        }
    }
}

fn run<T: Sync>(
    points: Vec<T>,
    f: impl Fn(&T) -> Result<Vec<String>, CliError> + Sync + Send,
) -> Result<Vec<Vec<String>>, CliError> {
    points.par_iter().map(f).collect()
}

/// Lexicographic product, first axis outermost.
fn product(a: &[f64], b: &[f64], c: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            for &z in c {
                out.push((x, y, z));
            }
        }
    }
    out
}

/// Rows `(gamma1_sq, eta, alpha_sq, fidelity, p10, d00, d01_re, d01_im,
/// d11)` over the product grid, `gamma1_sq` outermost. The `d` columns are
/// the unnormalized output elements. Impossible heralding gives `p10 = 0`
/// and `nan` elsewhere.
pub fn cmd_truncate(cfg: &Config) -> Result<String, CliError> {
    cfg.check_keys(&["detector", "gamma1_sq", "eta", "alpha_sq"])?;
    let detector = Detector::from_config(cfg, "conventional")?;
    let g1 = cfg.bounded_grid("gamma1_sq", &[0.0, 0.25, 0.5, 0.75, 1.0], 0.0, 1.0)?;
    let eta = cfg.bounded_grid("eta", &[1.0], 0.0, 1.0)?;
    let a2 = cfg.bounded_grid("alpha_sq", &[1.0], 0.0, f64::INFINITY)?;
    let points = product(&g1, &eta, &a2);
    let rows = run(points, |&(g, e, a)| {
        let vals = match detector.truncate(1.0 - g, e, a) {
            Ok(r) => {
                let d = r.components[0].1;
                [r.fidelity, r.p10, d.d00, d.d01.re, d.d01.im, d.d11]
            }
            Err(CoreError::ZeroProbability) => {
                [f64::NAN, 0.0, f64::NAN, f64::NAN, f64::NAN, f64::NAN]
            }
            Err(err) => return Err(err.into()),
        };
        Ok([g, e, a].iter().chain(&vals).map(|&x| g12(x)).collect())
    })?;
    Ok(csv(
        &[
            "gamma1_sq",
            "eta",
            "alpha_sq",
            "fidelity",
            "p10",
            "d00",
            "d01_re",
            "d01_im",
            "d11",
        ],
        &rows,
    ))
}

/// Rows `(beta, gamma1_sq, eta, alpha_opt, f_max)`, `beta` outermost.
pub fn cmd_prepare(cfg: &Config) -> Result<String, CliError> {
    cfg.check_keys(&["detector", "method", "beta", "gamma1_sq", "eta"])?;
    let detector = Detector::from_config(cfg, "mode-unresolving")?;
    let closed = match cfg.get("method") {
        None => detector == Detector::ModeUnresolving,
        Some("closed") if detector == Detector::ModeUnresolving => true,
        Some("closed") => {
            return Err(CliError::Usage(
                "`method`: closed form exists for mode-unresolving detectors only".into(),
            ))
        }
        Some("numeric") => false,
        Some(m) => return Err(CliError::Usage(format!("`method`: unknown `{m}`"))),
    };
    let beta = cfg.bounded_grid("beta", &[0.2, 5.0], 0.0, f64::INFINITY)?;
    let g1 = cfg.bounded_grid("gamma1_sq", &[0.5], 0.0, 1.0)?;
    let eta = cfg.bounded_grid("eta", &[0.5], 0.0, 1.0)?;
    let points = product(&beta, &g1, &eta);
    let rows = run(points, |&(b, g, e)| {
        let r = if closed {
            optimize_alpha_closed(b, 1.0 - g, e)?
        } else {
            optimize_alpha_numeric(b, &detector.preparation_model(1.0 - g, e))?
        };
        Ok(vec![g12(b), g12(g), g12(e), g12(r.alpha_opt), g12(r.f_max)])
    })?;
    Ok(csv(
        &["beta", "gamma1_sq", "eta", "alpha_opt", "f_max"],
        &rows,
    ))
}

/// Rows `(filter_fwhm_nm, gamma0_lower, gamma0_postfiltered,
/// fidelity_at_params)`. The fidelity uses on/off detectors at the
/// post-filtered mode match.
pub fn cmd_spdc(cfg: &Config) -> Result<String, CliError> {
    cfg.check_keys(&[
        "center_wavelength_nm",
        "coherent_fwhm_nm",
        "pump_fwhm_nm",
        "filter_fwhm_nm",
        "post_filter",
        "alpha_sq",
        "eta",
    ])?;
    let lambda = cfg.value("center_wavelength_nm", 790.0)?;
    let fwhm_c = cfg.value("coherent_fwhm_nm", 7.0)?;
    let fwhm_p = cfg.value("pump_fwhm_nm", 4.0)?;
    let filters = cfg.bounded_grid("filter_fwhm_nm", &[10.0, 4.0, 1.0], 0.0, f64::INFINITY)?;
    let post = match cfg.get("post_filter").unwrap_or("same") {
        "same" => PostFilter::Same,
        "none" => PostFilter::None,
        v => PostFilter::Fixed(v.parse().map_err(|_| {
            CliError::Usage(format!(
                "`post_filter`: expected same, none or a width in nm, got `{v}`"
            ))
        })?),
    };
    let alpha_sq: f64 = cfg.value("alpha_sq", 1.0)?;
    let eta: f64 = cfg.value("eta", 0.5)?;
    if !(0.0..=1.0).contains(&eta) || !(alpha_sq >= 0.0) {
        return Err(CliError::Usage(
            "`eta` must lie in [0, 1] and `alpha_sq` be nonnegative".into(),
        ));
    }

    let rows = run(filters, |&f| {
        let post_nm = match post {
            PostFilter::Same => Some(f),
            PostFilter::None => None,
            PostFilter::Fixed(w) => Some(w),
        };
        let bare = SpdcChain::from_bandwidths(lambda * NM, fwhm_c * NM, fwhm_p * NM, f * NM, None)?;
        let lower = gamma0_lower_bound(bare.sigma_c, bare.pump.sigma, bare.idler_filter.sigma)?;
        let post_value = match post_nm {
            Some(w) => SpdcChain::from_bandwidths(
                lambda * NM,
                fwhm_c * NM,
                fwhm_p * NM,
                f * NM,
                Some(w * NM),
            )?
            .gamma0()?,
            None => lower,
        };
        let fid = qsd_core::fidelity_conventional(alpha_sq, post_value, eta)?;
        Ok(vec![g12(f), g12(lower), g12(post_value), g12(fid)])
    })?;
    Ok(csv(
        &[
            "filter_fwhm_nm",
            "gamma0_lower",
            "gamma0_postfiltered",
            "fidelity_at_params",
        ],
        &rows,
    ))
}

#[derive(Debug, Clone, Copy)]
enum PostFilter {
    Same,
    None,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub csv: String,
    /// Rows whose largest difference exceeds the tolerance.
    pub failures: usize,
    pub worst: f64,
}

pub fn cmd_oracle_check(
    cfg: &Config,
    seed: u64,
    tolerance: f64,
    flip_bs2_phase: bool,
) -> Result<OracleCheck, CliError> {
    cfg.check_keys(&["points", "alpha_max", "max_components", "eta", "gamma0_sq"])?;
    let defaults = CloudSpec::default();
    let spec = CloudSpec {
        points: cfg.value("points", defaults.points)?,
        seed,
        alpha_max: cfg.value("alpha_max", defaults.alpha_max)?,
        max_components: cfg.value("max_components", defaults.max_components)?,
        etas: cfg.bounded_grid("eta", &defaults.etas, 0.0, 1.0)?,
        gamma0_levels: cfg.bounded_grid("gamma0_sq", &defaults.gamma0_levels, 0.0, 1.0)?,
        flip_bs2_phase,
    };
    if !(1..=3).contains(&spec.max_components) {
        return Err(CliError::Usage("`max_components` must be 1, 2 or 3".into()));
    }
    if !(spec.alpha_max >= 0.0) {
        return Err(CliError::Usage("`alpha_max` must be nonnegative".into()));
    }
    let rows = compare_all(&spec)?;
    let maxima: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.diffs.map(|d| d.max()))
        .collect();
    Ok(OracleCheck {
        csv: comparison_csv(&rows),
        failures: maxima.iter().filter(|&&d| !(d <= tolerance)).count(),
        worst: maxima.iter().copied().fold(0.0, f64::max),
    })
}
