use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use qsd_spectral::spdc::{gamma0_lower_bound, gamma0_post_filtered};
use qsd_spectral::{
    decompose, inner_product, mode_match_profiles, Grid, ModeProfile, SpectralMode,
};

fn gaussian() -> impl Strategy<Value = SpectralMode> {
    (-3.0..3.0f64, 0.3..2.5f64, -3.2..3.2f64)
        .prop_map(|(c, s, p)| SpectralMode::gaussian_with_phase(c, s, p).unwrap())
}

fn random_grid_mode(grid: Arc<Grid>) -> impl Strategy<Value = SpectralMode> {
    let n = grid.len();
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_map(move |v| {
        let amps = v.into_iter().map(|(r, i)| Complex64::new(r, i)).collect();
        SpectralMode::sampled_normalized(grid.clone(), amps).unwrap()
    })
}

fn random_grid() -> impl Strategy<Value = Arc<Grid>> {
    prop::collection::vec(0.01..1.0f64, 8..40).prop_map(|steps| {
        let mut w = vec![0.0];
        for s in steps {
            let last = *w.last().unwrap();
            w.push(last + s);
        }
        Arc::new(Grid::from_points(w).unwrap())
    })
}

fn sampled(mode: &SpectralMode, grid: &Arc<Grid>) -> SpectralMode {
    SpectralMode::sampled(grid.clone(), mode.sample_on(grid)).unwrap()
}

proptest! {
    #[test]
    fn cauchy_schwarz_gaussians(a in gaussian(), b in gaussian()) {
        prop_assert!(inner_product(&a, &b).unwrap().norm() <= 1.0 + 1e-10);
    }

    #[test]
    fn cauchy_schwarz_random_grids(
        (a, b) in random_grid().prop_flat_map(|g| (random_grid_mode(g.clone()), random_grid_mode(g)))
    ) {
        prop_assert!(inner_product(&a, &b).unwrap().norm() <= 1.0 + 1e-10);
        prop_assert!((inner_product(&a, &a).unwrap() - 1.0).norm() < 1e-10);
    }

    #[test]
    fn quadrature_matches_closed_form(a in gaussian(), b in gaussian()) {
        let (ca, sa) = match a { SpectralMode::Gaussian { center, sigma, .. } => (center, sigma), _ => unreachable!() };
        let (cb, sb) = match b { SpectralMode::Gaussian { center, sigma, .. } => (center, sigma), _ => unreachable!() };
        let lo = (ca - 6.0 * sa).min(cb - 6.0 * sb);
        let hi = (ca + 6.0 * sa).max(cb + 6.0 * sb);
        let grid = Arc::new(Grid::uniform(lo, hi, 801).unwrap());
        let exact = inner_product(&a, &b).unwrap();
        let quad = inner_product(&sampled(&a, &grid), &sampled(&b, &grid)).unwrap();
        prop_assert!((exact - quad).norm() < 1e-8, "{} vs {}", exact, quad);
    }

    #[test]
    fn decomposition_identities(
        xi in gaussian(), rho in gaussian(), z1 in gaussian(), z2 in gaussian(), p in 0.0..1.0f64
    ) {
        let d = decompose(&[(p, z1.clone()), (1.0 - p, z2.clone())], &xi, &rho).unwrap();
        prop_assert!((d.kappa.norm_sqr() + d.mu * d.mu - 1.0).abs() < 1e-10);
        let grid = Arc::new(Grid::uniform(-30.0, 30.0, 6001).unwrap());
        let rho_s = rho.sample_on(&grid);
        let xi_s = xi.sample_on(&grid);
        for (comp, zeta) in d.components.iter().zip([&z1, &z2]) {
            prop_assert!((comp.chi.norm_sqr() + comp.xi_perp * comp.xi_perp - 1.0).abs() < 1e-10);
            let Some(co) = comp.complement_overlap else { continue };
            if d.mu < 1e-3 || comp.xi_perp < 1e-3 {
                continue;
            }
            // explicit complement modes on a grid
            let zeta_s = zeta.sample_on(&grid);
            let perp_xi: Vec<_> = xi_s.iter().zip(&rho_s).map(|(x, r)| (x - d.kappa * r) / d.mu).collect();
            let perp_z: Vec<_> = zeta_s.iter().zip(&rho_s).map(|(z, r)| (z - comp.chi * r) / comp.xi_perp).collect();
            let direct: Complex64 = perp_z
                .iter()
                .zip(&perp_xi)
                .zip(grid.weights())
                .map(|((a, b), w)| a.conj() * b * *w)
                .sum();
            prop_assert!((direct - co).norm() < 1e-10, "{} vs {}", direct, co);
        }
    }

    #[test]
    fn mode_match_is_symmetric(
        xi in gaussian(), z1 in gaussian(), z2 in gaussian(), p in 0.0..1.0f64
    ) {
        let grid = Arc::new(Grid::uniform(-12.0, 12.0, 241).unwrap());
        let zeta = ModeProfile::mixture(&[(p, z1), (1.0 - p, z2)], Some(grid.clone())).unwrap();
        let xi = ModeProfile::pure(&xi, Some(grid)).unwrap();
        let a = mode_match_profiles(&xi, &zeta).unwrap().gamma0_sq;
        let b = mode_match_profiles(&zeta, &xi).unwrap().gamma0_sq;
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn post_filtering_never_lowers_match() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let mut w = || 10f64.powf(rng.gen_range(-2.0..2.0));
        let (sc, sp, si, sf) = (w(), w(), w(), w());
        let lb = gamma0_lower_bound(sc, sp, si).unwrap();
        let pf = gamma0_post_filtered(sc, sp, si, sf).unwrap();
        assert!(lb <= pf + 1e-12, "{sc} {sp} {si} {sf}: {lb} > {pf}");
        assert!(lb > 0.0 && lb <= 1.0 && pf > 0.0 && pf <= 1.0);
    }
}
