use crate::{FockVector, ModeIndex, Occupation, Port, SPECTRAL_SLOTS};

/// Which photons at a port an operator counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Counting {
    /// All spectral modes at the port.
    Total,
    /// One spectral basis mode only.
    Mode(usize),
}

/// Weight given to the counted photon number `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    /// `(1-η)^m`
    NoClick(f64),
    /// `m η (1-η)^(m-1)`
    OneClick(f64),
    /// `C(m,n) ηⁿ (1-η)^(m-n)`
    Count {
        eta: f64,
        n: usize,
    },
    /// `1 - (1-η)^m`
    Click(f64),
    /// `δ_{m,n}`
    Exactly(usize),
    Identity,
}

impl Weight {
    pub fn at(&self, m: usize) -> f64 {
        match *self {
            Weight::NoClick(eta) => (1.0 - eta).powi(m as i32),
            Weight::OneClick(eta) => match m {
                0 => 0.0,
                _ => m as f64 * eta * (1.0 - eta).powi(m as i32 - 1),
            },
            Weight::Count { eta, n } => {
                if n > m {
                    0.0
                } else {
                    binomial(m, n) * eta.powi(n as i32) * (1.0 - eta).powi((m - n) as i32)
                }
            }
            Weight::Click(eta) => 1.0 - (1.0 - eta).powi(m as i32),
            Weight::Exactly(n) => (m == n) as u8 as f64,
            Weight::Identity => 1.0,
        }
    }
}

fn binomial(m: usize, n: usize) -> f64 {
    let n = n.min(m - n);
    (0..n).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Operator diagonal in the occupation basis whose eigenvalue depends only
/// on the photon count at one port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalOp {
    pub port: Port,
    pub counting: Counting,
    pub weight: Weight,
}

impl DiagonalOp {
    pub fn count(&self, o: Occupation) -> usize {
        match self.counting {
            Counting::Total => o.port_total(self.port),
            Counting::Mode(k) => o.get(ModeIndex::new(self.port, k)),
        }
    }

    pub fn eigenvalue(&self, o: Occupation) -> f64 {
        self.weight.at(self.count(o))
    }

    pub fn apply(&self, state: &FockVector) -> FockVector {
        let amps = state.iter().map(|(o, a)| (o, a * self.eigenvalue(o)));
        FockVector::from_amplitudes(amps, state.cutoff())
    }

    /// `⟨ψ|Π|ψ⟩`.
    pub fn expectation(&self, state: &FockVector) -> f64 {
        state
            .iter()
            .map(|(o, a)| a.norm_sqr() * self.eigenvalue(o))
            .sum()
    }

    /// Eigenvalues over every occupation of this port with at most `cutoff`
    /// photons, listed as `(occupation, eigenvalue)`.
    pub fn spectrum(&self, cutoff: usize) -> Vec<(Occupation, f64)> {
        let mut out = Vec::new();
        port_occupations(self.port, cutoff, 0, Occupation::VACUUM, &mut out);
        out.into_iter().map(|o| (o, self.eigenvalue(o))).collect()
    }
}

fn port_occupations(
    port: Port,
    budget: usize,
    k: usize,
    occ: Occupation,
    out: &mut Vec<Occupation>,
) {
    if k == SPECTRAL_SLOTS {
        out.push(occ);
        return;
    }
    for n in 0..=budget {
        port_occupations(
            port,
            budget - n,
            k + 1,
            occ.with(ModeIndex::new(port, k), n),
            out,
        );
    }
}

/// Projector onto `n` photons in total at `port`.
pub fn total_number_projector(port: Port, n: usize) -> DiagonalOp {
    DiagonalOp {
        port,
        counting: Counting::Total,
        weight: Weight::Exactly(n),
    }
}

/// Projector onto `n` photons in spectral basis mode `k` at `port`.
pub fn mode_number_projector(port: Port, k: usize, n: usize) -> DiagonalOp {
    DiagonalOp {
        port,
        counting: Counting::Mode(k),
        weight: Weight::Exactly(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projectors_resolve_identity() {
        for (o, _) in total_number_projector(Port::C2, 0).spectrum(6) {
            let sum: f64 = (0..=6)
                .map(|n| total_number_projector(Port::C2, n).eigenvalue(o))
                .sum();
            assert_eq!(sum, 1.0);
            for n in 0..=6 {
                let w = total_number_projector(Port::C2, n).eigenvalue(o);
                assert_eq!(w * w, w);
            }
        }
    }

    #[test]
    fn total_versus_mode_counting() {
        let o = Occupation::VACUUM
            .with(ModeIndex::new(Port::C2, 0), 1)
            .with(ModeIndex::new(Port::C2, 1), 1);
        assert_eq!(total_number_projector(Port::C2, 2).eigenvalue(o), 1.0);
        assert_eq!(mode_number_projector(Port::C2, 0, 1).eigenvalue(o), 1.0);
        assert_eq!(mode_number_projector(Port::C2, 0, 2).eigenvalue(o), 0.0);
    }

    #[test]
    fn weights() {
        assert_eq!(Weight::OneClick(0.3).at(2), 2.0 * 0.3 * 0.7);
        assert_eq!(Weight::OneClick(1.0).at(1), 1.0);
        assert_eq!(Weight::NoClick(1.0).at(0), 1.0);
        assert_eq!(Weight::NoClick(0.0).at(5), 1.0);
        assert!((Weight::Click(0.25).at(3) - (1.0 - 0.75f64.powi(3))).abs() < 1e-16);
        assert!((Weight::Count { eta: 0.4, n: 2 }.at(5) - 10.0 * 0.16 * 0.216).abs() < 1e-15);
    }
}
