use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{DiagonalOp, FockError, FockVector, Occupation, Port, Result};

/// Sparse density operator, `elements[(a, b)] = ⟨a|ρ|b⟩`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DensityOp {
    elements: BTreeMap<(Occupation, Occupation), Complex64>,
}

impl DensityOp {
    pub fn from_pure(psi: &FockVector) -> Self {
        let mut elements = BTreeMap::new();
        for (a, x) in psi.iter() {
            for (b, y) in psi.iter() {
                elements.insert((a, b), x * y.conj());
            }
        }
        Self { elements }
    }

    pub fn from_elements(
        elems: impl IntoIterator<Item = ((Occupation, Occupation), Complex64)>,
    ) -> Self {
        let mut out = Self::default();
        for (k, v) in elems {
            *out.elements.entry(k).or_default() += v;
        }
        out
    }

    pub fn element(&self, a: Occupation, b: Occupation) -> Complex64 {
        self.elements.get(&(a, b)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Occupation, Occupation), Complex64)> + '_ {
        self.elements.iter().map(|(k, v)| (*k, *v))
    }

    /// `self += w · other`.
    pub fn add_scaled(&mut self, other: &Self, w: f64) {
        for (k, v) in &other.elements {
            *self.elements.entry(*k).or_default() += v * w;
        }
    }

    pub fn scaled(&self, w: f64) -> Self {
        Self {
            elements: self.elements.iter().map(|(k, v)| (*k, v * w)).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.elements
            .iter()
            .filter(|((a, b), _)| a == b)
            .map(|(_, v)| v.re)
            .sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.elements
            .iter()
            .map(|(&(a, b), v)| (v - self.element(b, a).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Occupations appearing in any row or column, ascending.
    pub fn support(&self) -> Vec<Occupation> {
        let set: BTreeSet<Occupation> = self.elements.keys().flat_map(|&(a, b)| [a, b]).collect();
        set.into_iter().collect()
    }

    pub fn to_dense(&self, basis: &[Occupation]) -> DMatrix<Complex64> {
        DMatrix::from_fn(basis.len(), basis.len(), |i, j| {
            self.element(basis[i], basis[j])
        })
    }

    /// Smallest eigenvalue on the support.
    pub fn min_eigenvalue(&self) -> f64 {
        let basis = self.support();
        if basis.is_empty() {
            return 0.0;
        }
        let m = self.to_dense(&basis);
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Rank estimate: eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let basis = self.support();
        let m = self.to_dense(&basis);
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .filter(|&&e| e > tol)
            .count()
    }

    /// `⟨φ|ρ|φ⟩`.
    pub fn expectation_pure(&self, phi: &FockVector) -> f64 {
        self.elements
            .iter()
            .map(|(&(a, b), v)| phi.amplitude(a).conj() * v * phi.amplitude(b))
            .sum::<Complex64>()
            .re
    }

    /// Partial trace over every port not in `keep`.
    pub fn reduce(&self, keep: &[Port]) -> Self {
        let mask = Occupation::mask(keep);
        let elems = self
            .elements
            .iter()
            .filter(|(&(a, b), _)| a.restrict(!mask) == b.restrict(!mask))
            .map(|(&(a, b), v)| ((a.restrict(mask), b.restrict(mask)), *v));
        Self::from_elements(elems)
    }
}

fn check_ports(povms: &[DiagonalOp], keep: &[Port]) -> Result<()> {
    if povms.iter().any(|p| keep.contains(&p.port)) {
        return Err(FockError::InvalidParameter(
            "measured ports must be traced out".into(),
        ));
    }
    Ok(())
}

fn eigenvalue(povms: &[DiagonalOp], o: Occupation) -> f64 {
    povms.iter().map(|p| p.eigenvalue(o)).product()
}

fn normalize(rho: DensityOp) -> Result<(DensityOp, f64)> {
    let p = rho.trace();
    if !(p > 1e-300) {
        return Err(FockError::ZeroProbability(p));
    }
    Ok((rho.scaled(1.0 / p), p))
}

/// `Tr_rest[ρ Π]` normalized, with `Π` the product of `povms`, together
/// with the outcome probability `Tr[ρ Π]`. `povms` must act on traced ports.
pub fn conditional_state(
    rho: &DensityOp,
    povms: &[DiagonalOp],
    keep: &[Port],
) -> Result<(DensityOp, f64)> {
    check_ports(povms, keep)?;
    let mask = Occupation::mask(keep);
    let elems = rho
        .elements
        .iter()
        .filter(|(&(a, b), _)| a.restrict(!mask) == b.restrict(!mask))
        .map(|(&(a, b), v)| {
            (
                (a.restrict(mask), b.restrict(mask)),
                v * eigenvalue(povms, a),
            )
        });
    normalize(DensityOp::from_elements(elems))
}

/// [`conditional_state`] for `ρ = |ψ⟩⟨ψ|` without forming `ρ`.
pub fn conditional_state_pure(
    psi: &FockVector,
    povms: &[DiagonalOp],
    keep: &[Port],
) -> Result<(DensityOp, f64)> {
    check_ports(povms, keep)?;
    let mask = Occupation::mask(keep);
    let mut groups: BTreeMap<Occupation, Vec<(Occupation, Complex64)>> = BTreeMap::new();
    for (o, a) in psi.iter() {
        groups
            .entry(o.restrict(!mask))
            .or_default()
            .push((o.restrict(mask), a));
    }
    let mut elements: BTreeMap<(Occupation, Occupation), Complex64> = BTreeMap::new();
    for (rest, terms) in &groups {
        let w = eigenvalue(povms, *rest);
        if w == 0.0 {
            continue;
        }
        for (a, x) in terms {
            for (b, y) in terms {
                *elements.entry((*a, *b)).or_default() += x * y.conj() * w;
            }
        }
    }
    normalize(DensityOp { elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{
        apply_beamsplitter, coherent_state, single_photon_state, total_number_projector,
        BeamSplitter, Counting, ModeIndex, Weight,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_state_is_rank_one() {
        let s = coherent_state(Port::B3, &[c(0.6, 0.0), c(0.0, 0.8)], c(0.9, 0.1), 16).unwrap();
        let s = s.scaled(c(1.0 / s.norm_sq().sqrt(), 0.0));
        let rho = DensityOp::from_pure(&s);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert_eq!(rho.rank(1e-12), 1);
        assert!(rho.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn identity_measurement_gives_reduced_state() {
        let bs = BeamSplitter::new((Port::A1, Port::A2), (Port::B1, Port::B2));
        let s = apply_beamsplitter(&single_photon_state(Port::A1, &[c(1.0, 0.0)]).unwrap(), &bs);
        let id = DiagonalOp {
            port: Port::B2,
            counting: Counting::Total,
            weight: Weight::Identity,
        };
        let (rho, p) = conditional_state_pure(&s, &[id], &[Port::B1]).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        let one = Occupation::VACUUM.with(ModeIndex::new(Port::B1, 0), 1);
        assert!((rho.element(one, one) - 0.5).norm() < 1e-15);
        assert!((rho.element(Occupation::VACUUM, Occupation::VACUUM) - 0.5).norm() < 1e-15);
        assert!(rho.element(one, Occupation::VACUUM).norm() < 1e-15);

        let (rho2, p2) = conditional_state(&DensityOp::from_pure(&s), &[id], &[Port::B1]).unwrap();
        assert_eq!(p2, p);
        assert!((rho2.element(one, one) - 0.5).norm() < 1e-15);
    }

    #[test]
    fn no_photon_no_click() {
        let v = FockVector::vacuum(3);
        assert!(matches!(
            conditional_state_pure(&v, &[total_number_projector(Port::C2, 1)], &[Port::B1]),
            Err(FockError::ZeroProbability(_))
        ));
    }

    #[test]
    fn measured_port_must_be_traced() {
        let v = FockVector::vacuum(3);
        assert!(
            conditional_state_pure(&v, &[total_number_projector(Port::B1, 0)], &[Port::B1])
                .is_err()
        );
    }

    #[test]
    fn reduce_mixes_branches() {
        let s = single_photon_state(Port::A1, &[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let rho = DensityOp::from_pure(&s).reduce(&[Port::A1]);
        assert_eq!(rho, DensityOp::from_pure(&s));
        let gone = DensityOp::from_pure(&s).reduce(&[Port::B1]);
        assert!((gone.element(Occupation::VACUUM, Occupation::VACUUM) - 1.0).norm() < 1e-15);
    }
}
