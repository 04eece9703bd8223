use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::{FockError, ModeIndex, Occupation, Port, Result, MAX_OCCUPATION, SPECTRAL_SLOTS};

/// Largest total-photon cutoff chosen automatically.
pub const CUTOFF_CAP: usize = 24;

/// Poisson tail allowed beyond the cutoff.
pub const TAIL_BOUND: f64 = 1e-12;

const PRUNE: f64 = 1e-16;

/// Sparse state vector over occupation numbers with total photon number at
/// most `cutoff`. Ordered storage keeps every sum deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: BTreeMap<Occupation, Complex64>,
    cutoff: usize,
}

impl FockVector {
    pub fn vacuum(cutoff: usize) -> Self {
        Self::from_amplitudes([(Occupation::VACUUM, Complex64::new(1.0, 0.0))], cutoff)
    }

    /// Terms above the cutoff are dropped; repeated keys add.
    pub fn from_amplitudes(
        amps: impl IntoIterator<Item = (Occupation, Complex64)>,
        cutoff: usize,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (o, a) in amps {
            if o.total() <= cutoff {
                *map.entry(o).or_insert(Complex64::new(0.0, 0.0)) += a;
            }
        }
        Self { amps: map, cutoff }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, o: Occupation) -> Complex64 {
        self.amps.get(&o).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Occupation, Complex64)> + '_ {
        self.amps.iter().map(|(o, a)| (*o, *a))
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .filter_map(|(o, a)| other.amps.get(o).map(|b| a.conj() * b))
            .sum()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            amps: self.amps.iter().map(|(o, a)| (*o, a * s)).collect(),
            cutoff: self.cutoff,
        }
    }

    /// Ports holding at least one photon in some term.
    pub fn occupied_ports(&self) -> Vec<Port> {
        Port::ALL
            .into_iter()
            .filter(|&p| self.amps.keys().any(|o| o.port_total(p) > 0))
            .collect()
    }

    /// Product state on disjoint ports; the cutoffs add.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mine = Occupation::mask(&self.occupied_ports());
        let theirs = Occupation::mask(&other.occupied_ports());
        if mine & theirs != 0 {
            return Err(FockError::PortOverlap);
        }
        let mut amps = BTreeMap::new();
        for (o1, a1) in &self.amps {
            for (o2, a2) in &other.amps {
                amps.insert(Occupation(o1.0 | o2.0), a1 * a2);
            }
        }
        Ok(Self {
            amps,
            cutoff: self.cutoff + other.cutoff,
        })
    }

    /// Applies `â†(m)`; terms pushed past the cutoff are dropped.
    pub fn create(&self, m: ModeIndex) -> Self {
        let amps = self.amps.iter().filter_map(|(o, a)| {
            let n = o.get(m);
            (o.total() < self.cutoff && n < MAX_OCCUPATION)
                .then(|| (o.with(m, n + 1), a * ((n + 1) as f64).sqrt()))
        });
        Self::from_amplitudes(amps, self.cutoff)
    }

    /// Applies `â(m)`.
    pub fn annihilate(&self, m: ModeIndex) -> Self {
        let amps = self.amps.iter().filter_map(|(o, a)| {
            let n = o.get(m);
            (n > 0).then(|| (o.with(m, n - 1), a * (n as f64).sqrt()))
        });
        Self::from_amplitudes(amps, self.cutoff)
    }

    pub(crate) fn from_map(amps: BTreeMap<Occupation, Complex64>, cutoff: usize) -> Self {
        let mut s = Self { amps, cutoff };
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.amps.retain(|_, a| a.norm() >= PRUNE);
    }

    /// One line per term: `occupation TAB re TAB im`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (o, a) in &self.amps {
            out.push_str(&format!("{o}\t{:e}\t{:e}\n", a.re, a.im));
        }
        out
    }
}

/// `Σ_{n > cutoff} e^{-λ} λⁿ/n!`, summed upward to avoid cancellation.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let mut term = (-mean).exp();
    for n in 1..=cutoff + 1 {
        term *= mean / n as f64;
    }
    let mut sum = 0.0;
    let mut n = cutoff + 1;
    while term > 1e-300 && (term > sum * 1e-17 || (n as f64) < mean) {
        sum += term;
        n += 1;
        term *= mean / n as f64;
    }
    sum
}

/// Smallest cutoff whose Poisson tail at mean `alpha_sq` is below
/// [`TAIL_BOUND`], plus `extra` photons from other sources.
pub fn cutoff_for(alpha_sq: f64, extra: usize) -> Result<usize> {
    if !(alpha_sq >= 0.0) || !alpha_sq.is_finite() {
        return Err(FockError::InvalidParameter(format!(
            "mean photon number {alpha_sq}"
        )));
    }
    let n = (0..=CUTOFF_CAP)
        .find(|&n| poisson_tail(alpha_sq, n) < TAIL_BOUND)
        .map(|n| n + extra)
        .filter(|&n| n <= CUTOFF_CAP);
    n.ok_or(FockError::CutoffCap(alpha_sq))
}

fn check_coeffs(coeffs: &[Complex64]) -> Result<()> {
    if coeffs.is_empty() || coeffs.len() > SPECTRAL_SLOTS {
        return Err(FockError::InvalidCoefficients(format!(
            "{} coefficients",
            coeffs.len()
        )));
    }
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(FockError::InvalidCoefficients(format!("norm {norm}")));
    }
    Ok(())
}

/// `|α; ξ⟩` at `port` with `ξ = Σ_k coeffs[k] e_k`, i.e. the product of
/// coherent states `|α c_k⟩` on each basis mode, truncated at `cutoff`
/// total photons.
pub fn coherent_state(
    port: Port,
    coeffs: &[Complex64],
    alpha: Complex64,
    cutoff: usize,
) -> Result<FockVector> {
    check_coeffs(coeffs)?;
    if cutoff > MAX_OCCUPATION {
        return Err(FockError::InvalidParameter(format!(
            "cutoff {cutoff} exceeds {MAX_OCCUPATION}"
        )));
    }
    let tail = poisson_tail(alpha.norm_sqr(), cutoff);
    if tail >= TAIL_BOUND {
        return Err(FockError::CutoffTooSmall {
            cutoff,
            tail,
            bound: TAIL_BOUND,
        });
    }
    let amps: Vec<Complex64> = coeffs.iter().map(|c| alpha * c).collect();
    let mut map = BTreeMap::new();
    let prefactor = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    fill_coherent(
        port,
        &amps,
        0,
        cutoff,
        Occupation::VACUUM,
        prefactor,
        &mut map,
    );
    Ok(FockVector::from_map(map, cutoff))
}

fn fill_coherent(
    port: Port,
    amps: &[Complex64],
    k: usize,
    budget: usize,
    occ: Occupation,
    value: Complex64,
    out: &mut BTreeMap<Occupation, Complex64>,
) {
    if k == amps.len() {
        out.insert(occ, value);
        return;
    }
    let m = ModeIndex::new(port, k);
    let mut v = value;
    for n in 0..=budget {
        if n > 0 {
            if amps[k] == Complex64::new(0.0, 0.0) {
                break;
            }
            v *= amps[k] / (n as f64).sqrt();
        }
        fill_coherent(port, amps, k + 1, budget - n, occ.with(m, n), v, out);
    }
}

/// `Σ_k coeffs[k] |1_k⟩` at `port`.
pub fn single_photon_state(port: Port, coeffs: &[Complex64]) -> Result<FockVector> {
    check_coeffs(coeffs)?;
    let amps = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| (Occupation::VACUUM.with(ModeIndex::new(port, k), 1), *c));
    let mut v = FockVector::from_amplitudes(amps, 1);
    v.prune();
    Ok(v)
}
