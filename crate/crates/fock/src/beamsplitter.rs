use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use crate::{FockVector, ModeIndex, Port, SPECTRAL_SLOTS};

/// Lossless 50:50 beam splitter mapping input ports `(a, b)` to output
/// ports `(a', b')`:
///
/// `â† → (â'† + r b̂'†)/√2`, `b̂† → (b̂'† + r â'†)/√2`, with `r = i` by
/// default. Each spectral basis index is mixed independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    pub inputs: (Port, Port),
    pub outputs: (Port, Port),
    pub reflection: Complex64,
}

impl BeamSplitter {
    pub fn new(inputs: (Port, Port), outputs: (Port, Port)) -> Self {
        Self {
            inputs,
            outputs,
            reflection: Complex64::new(0.0, 1.0),
        }
    }

    /// Replaces the reflection factor `i` by `-i`.
    pub fn conjugate_phase(mut self) -> Self {
        self.reflection = self.reflection.conj();
        self
    }

    /// The inverse transformation, mapping the outputs back to the inputs.
    /// Valid for purely imaginary `r`, where the mixing matrix is unitary.
    pub fn inverse(&self) -> Self {
        Self {
            inputs: self.outputs,
            outputs: self.inputs,
            reflection: self.reflection.conj(),
        }
    }
}

/// `(t x + r y)ⁿ (r x + t y)ᵐ` expanded in `xᵖ y^(n+m-p)` and converted to
/// normalized Fock amplitudes.
fn output_amplitudes(n: usize, m: usize, r: Complex64) -> Vec<Complex64> {
    let t = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let r = r * std::f64::consts::FRAC_1_SQRT_2;
    let total = n + m;
    let lf = |k: usize| -> f64 { (1..=k).map(|i| (i as f64).ln()).sum() };
    let binom = |a: usize, b: usize| -> f64 { (lf(a) - lf(b) - lf(a - b)).exp() };
    let mut out = vec![Complex64::new(0.0, 0.0); total + 1];
    for i in 0..=n {
        let f1 = t.powu(i as u32) * r.powu((n - i) as u32) * binom(n, i);
        for j in 0..=m {
            // j powers of x from the second factor
            let f2 = r.powu(j as u32) * t.powu((m - j) as u32) * binom(m, j);
            out[i + j] += f1 * f2;
        }
    }
    for (p, v) in out.iter_mut().enumerate() {
        *v *= (0.5 * (lf(p) + lf(total - p) - lf(n) - lf(m))).exp();
    }
    out
}

pub fn apply_beamsplitter(state: &FockVector, bs: &BeamSplitter) -> FockVector {
    (0..SPECTRAL_SLOTS).fold(state.clone(), |s, k| apply_beamsplitter_mode(&s, bs, k))
}

/// Mixes spectral basis index `k` only.
pub fn apply_beamsplitter_mode(state: &FockVector, bs: &BeamSplitter, k: usize) -> FockVector {
    let ia = ModeIndex::new(bs.inputs.0, k);
    let ib = ModeIndex::new(bs.inputs.1, k);
    let oa = ModeIndex::new(bs.outputs.0, k);
    let ob = ModeIndex::new(bs.outputs.1, k);
    let mut cache: HashMap<(usize, usize), Vec<Complex64>> = HashMap::new();
    let mut next = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let (n, m) = (occ.get(ia), occ.get(ib));
        let base = occ.with(ia, 0).with(ib, 0);
        let coeffs = cache
            .entry((n, m))
            .or_insert_with(|| output_amplitudes(n, m, bs.reflection));
        for (p, c) in coeffs.iter().enumerate() {
            if c.norm() < 1e-300 {
                continue;
            }
            let o = base.with(oa, p).with(ob, n + m - p);
            *next.entry(o).or_insert(Complex64::new(0.0, 0.0)) += amp * c;
        }
    }
    FockVector::from_map(next, state.cutoff())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{coherent_state, single_photon_state, Occupation};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn photon_splits_with_reflection_i() {
        let bs = BeamSplitter::new((Port::A1, Port::A2), (Port::B1, Port::B2));
        let s = apply_beamsplitter(&single_photon_state(Port::A1, &[c(1.0, 0.0)]).unwrap(), &bs);
        let b1 = Occupation::VACUUM.with(ModeIndex::new(Port::B1, 0), 1);
        let b2 = Occupation::VACUUM.with(ModeIndex::new(Port::B2, 0), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(b1) - h).norm() < 1e-15);
        assert!((s.amplitude(b2) - c(0.0, h)).norm() < 1e-15);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn coherent_pulse_splits() {
        let alpha = c(0.7, -0.4);
        let bs = BeamSplitter::new((Port::B3, Port::B2), (Port::C3, Port::C2));
        let s = apply_beamsplitter(
            &coherent_state(Port::B3, &[c(1.0, 0.0)], alpha, 20).unwrap(),
            &bs,
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c3 = coherent_state(Port::C3, &[c(1.0, 0.0)], alpha * h, 20).unwrap();
        let c2 = coherent_state(Port::C2, &[c(1.0, 0.0)], alpha * c(0.0, h), 20).unwrap();
        let expected = c3.tensor(&c2).unwrap();
        let overlap = expected.inner(&s);
        assert!((overlap - 1.0).norm() < 1e-10, "{overlap}");
    }

    #[test]
    fn hong_ou_mandel() {
        let bs = BeamSplitter::new((Port::A1, Port::A2), (Port::B1, Port::B2));
        let one = [c(1.0, 0.0)];
        let input = single_photon_state(Port::A1, &one)
            .unwrap()
            .tensor(&single_photon_state(Port::A2, &one).unwrap())
            .unwrap();
        let out = apply_beamsplitter(&input, &bs);
        let coinc = Occupation::VACUUM
            .with(ModeIndex::new(Port::B1, 0), 1)
            .with(ModeIndex::new(Port::B2, 0), 1);
        assert!(out.amplitude(coinc).norm() < 1e-15);
        assert!((out.norm_sq() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distinguishable_photons_do_not_bunch() {
        let bs = BeamSplitter::new((Port::A1, Port::A2), (Port::B1, Port::B2));
        let input = single_photon_state(Port::A1, &[c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap()
            .tensor(&single_photon_state(Port::A2, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap())
            .unwrap();
        let out = apply_beamsplitter(&input, &bs);
        let coinc: f64 = out
            .iter()
            .filter(|(o, _)| o.port_total(Port::B1) == 1 && o.port_total(Port::B2) == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        assert!((coinc - 0.5).abs() < 1e-14);
    }

    #[test]
    fn inverse_restores_input() {
        let bs = BeamSplitter::new((Port::B3, Port::B2), (Port::C3, Port::C2));
        let input = coherent_state(Port::B3, &[c(0.6, 0.0), c(0.0, 0.8)], c(1.1, 0.2), 20)
            .unwrap()
            .tensor(&single_photon_state(Port::B2, &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap())
            .unwrap();
        let back = apply_beamsplitter(&apply_beamsplitter(&input, &bs), &bs.inverse());
        assert!((back.inner(&input) - input.norm_sq()).norm() < 1e-12);
    }
}
