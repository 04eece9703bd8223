use num_complex::Complex64;

use crate::{inner_product, Result, SpectralMode, DEPENDENCE_THRESHOLD};

/// Orthonormal frame spanning a small set of modes.
///
/// `coeffs[i][k] = (e_k, m_i)`, so `m_i = Σ_k coeffs[i][k] e_k`, and
/// `basis[k][i]` expands the basis vectors back in the inputs,
/// `e_k = Σ_i basis[k][i] m_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    pub coeffs: Vec<Vec<Complex64>>,
    pub basis: Vec<Vec<Complex64>>,
}

impl OrthonormalBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of input mode `i`, padded to `dim()`.
    pub fn coords(&self, i: usize) -> &[Complex64] {
        &self.coeffs[i]
    }
}

/// `G[i][j] = (m_i, m_j)`.
pub fn gram_matrix(modes: &[SpectralMode]) -> Result<Vec<Vec<Complex64>>> {
    let n = modes.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&modes[i], &modes[j])?;
            g[i][j] = v;
            g[j][i] = v.conj();
        }
    }
    Ok(g)
}

pub fn gram_schmidt_basis(modes: &[SpectralMode]) -> Result<OrthonormalBasis> {
    Ok(gram_schmidt_from_gram(&gram_matrix(modes)?))
}

/// Squared residual norms below this are rounding noise of the Gram
/// entries, which limits the resolvable residual to about `1e-7`.
const GRAM_NOISE: f64 = 1e-14;

/// Gram–Schmidt in input order using only the Gram matrix. Inputs whose
/// residual norm falls below the dependence threshold, or below the Gram
/// rounding floor, add no dimension.
pub fn gram_schmidt_from_gram(gram: &[Vec<Complex64>]) -> OrthonormalBasis {
    let n = gram.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut coeffs = vec![Vec::new(); n];

    // (e_k, m_i) with e_k = Σ_l b[l] m_l
    let project = |b: &[Complex64], i: usize| -> Complex64 {
        b.iter()
            .enumerate()
            .map(|(l, bl)| bl.conj() * gram[l][i])
            .sum()
    };
    let norm_sq = |v: &[Complex64]| -> f64 {
        let mut acc = zero;
        for (l, vl) in v.iter().enumerate() {
            for (m, vm) in v.iter().enumerate() {
                acc += vl.conj() * gram[l][m] * vm;
            }
        }
        acc.re
    };

    for i in 0..n {
        let mut r = vec![zero; n];
        r[i] = Complex64::new(1.0, 0.0);
        let mut c = vec![zero; basis.len()];
        // two passes keep the frame orthogonal when residuals are small
        for _ in 0..2 {
            for (k, e) in basis.iter().enumerate() {
                let overlap: Complex64 = e
                    .iter()
                    .enumerate()
                    .map(|(l, el)| el.conj() * gram_row_dot(gram, l, &r))
                    .sum();
                c[k] += overlap;
                for (rl, el) in r.iter_mut().zip(e) {
                    *rl -= overlap * el;
                }
            }
        }
        let res_sq = norm_sq(&r);
        let res = res_sq.max(0.0).sqrt();
        if res >= DEPENDENCE_THRESHOLD && res_sq >= GRAM_NOISE * gram[i][i].re {
            let e: Vec<Complex64> = r.iter().map(|x| x / res).collect();
            basis.push(e);
            c.push(Complex64::new(res, 0.0));
        }
        coeffs[i] = c;
    }
    let dim = basis.len();
    for c in coeffs.iter_mut() {
        c.resize(dim, zero);
    }
    // recompute coordinates from the final frame
    for (i, row) in coeffs.iter_mut().enumerate() {
        for (k, e) in basis.iter().enumerate() {
            row[k] = project(e, i);
        }
    }
    OrthonormalBasis { coeffs, basis }
}

/// `Σ_m G[l][m] v[m] = (m_l, Σ_m v_m m_m)`.
fn gram_row_dot(gram: &[Vec<Complex64>], l: usize, v: &[Complex64]) -> Complex64 {
    gram[l].iter().zip(v).map(|(g, x)| g * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orthonormality_defect(b: &OrthonormalBasis, gram: &[Vec<Complex64>]) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, ek) in b.basis.iter().enumerate() {
            for (l, el) in b.basis.iter().enumerate() {
                let mut v = Complex64::new(0.0, 0.0);
                for (i, a) in ek.iter().enumerate() {
                    for (j, bb) in el.iter().enumerate() {
                        v += a.conj() * gram[i][j] * bb;
                    }
                }
                let target = if k == l { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    #[test]
    fn single_mode() {
        let xi = SpectralMode::gaussian(0.0, 1.0).unwrap();
        let b = gram_schmidt_basis(&[xi]).unwrap();
        assert_eq!(b.dim(), 1);
        assert!((b.coeffs[0][0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn duplicate_collapses() {
        let xi = SpectralMode::gaussian(0.0, 1.0).unwrap();
        let b = gram_schmidt_basis(&[xi.clone(), xi]).unwrap();
        assert_eq!(b.dim(), 1);
        assert!((b.coeffs[1][0] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn two_modes() {
        let xi = SpectralMode::gaussian(0.0, 1.0).unwrap();
        let zeta = SpectralMode::gaussian_with_phase(0.9, 1.1, 0.7).unwrap();
        let gamma = inner_product(&xi, &zeta).unwrap();
        let gram = gram_matrix(&[xi.clone(), zeta.clone()]).unwrap();
        let b = gram_schmidt_from_gram(&gram);
        assert_eq!(b.dim(), 2);
        assert!((b.coeffs[1][0] - gamma).norm() < 1e-14);
        let perp = (1.0 - gamma.norm_sqr()).sqrt();
        assert!((b.coeffs[1][1] - perp).norm() < 1e-14);
        assert!(orthonormality_defect(&b, &gram) < 1e-13);
    }

    #[test]
    fn three_modes_reconstruct() {
        let modes = [
            SpectralMode::gaussian(0.0, 1.0).unwrap(),
            SpectralMode::gaussian_with_phase(0.3, 1.0, 1.0).unwrap(),
            SpectralMode::gaussian_with_phase(-0.4, 0.7, -2.0).unwrap(),
        ];
        let gram = gram_matrix(&modes).unwrap();
        let b = gram_schmidt_from_gram(&gram);
        assert!(b.dim() >= 2);
        assert!(orthonormality_defect(&b, &gram) < 1e-12);
        // (m_i, m_j) = Σ_k conj(C[i][k]) C[j][k] when the frame spans the inputs
        for i in 0..3 {
            for j in 0..3 {
                let v: Complex64 = (0..b.dim())
                    .map(|k| b.coeffs[i][k].conj() * b.coeffs[j][k])
                    .sum();
                assert!((v - gram[i][j]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rephased_copy_adds_no_dimension() {
        for phase in [0.3, 1.1, 2.9, -0.7] {
            let a = SpectralMode::gaussian(0.0, 1.0).unwrap();
            let b = SpectralMode::gaussian_with_phase(0.0, 1.0, phase).unwrap();
            let basis = gram_schmidt_basis(&[a, b]).unwrap();
            assert_eq!(basis.dim(), 1);
            assert!((basis.coords(1)[0].norm() - 1.0).abs() < 1e-15);
        }
    }
}
