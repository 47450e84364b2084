//! Two-photon states over the four optical modes.
//!
//! [`TwoPhotonState`] holds the bosonic (symmetrized) amplitudes over the
//! ten unordered mode pairs. A doubly occupied pair is the normalized
//! two-quanta ket, so a creation-operator monomial `(x,p)^2` enters with
//! weight `sqrt(2)` relative to its polynomial coefficient; dropping that
//! weight is exactly what breaks probability conservation.
//!
//! [`DistinguishableTwoPhotonState`] keeps the two photons labeled and
//! stores all sixteen ordered pair amplitudes. It models the fully
//! distinguishable limit in which no two-photon interference survives.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jones::JonesVector;
use crate::modes::{ModeAmplitudes, ModeIndex, ModePair};
use crate::numfmt::g12;

/// Bosonic two-photon state: amplitudes over the ten unordered pairs in
/// canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    amps: [Complex64; 10],
}

impl TwoPhotonState {
    pub fn zero() -> Self {
        TwoPhotonState { amps: [Complex64::ZERO; 10] }
    }

    /// Adopts raw amplitudes in canonical pair order. No normalization is
    /// imposed; validity is checked separately via [`norm`](Self::norm).
    pub fn from_amplitudes(amps: [Complex64; 10]) -> Self {
        TwoPhotonState { amps }
    }

    /// The basis ket for one mode pair.
    pub fn basis_state(pair: ModePair) -> Self {
        let mut s = Self::zero();
        s.amps[pair.index()] = Complex64::ONE;
        s
    }

    pub fn amplitude(&self, pair: ModePair) -> Complex64 {
        self.amps[pair.index()]
    }

    pub fn set_amplitude(&mut self, pair: ModePair, value: Complex64) {
        self.amps[pair.index()] = value;
    }

    pub fn amplitudes(&self) -> &[Complex64; 10] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance
    }

    /// Inner product, conjugate-linear in `self`: `<self|other>`.
    pub fn overlap(&self, other: &TwoPhotonState) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Keeps only the four one-photon-per-arm amplitudes; the bunched
    /// components are zeroed. This is the post-selected (coincidence)
    /// part of the state, left unnormalized.
    pub fn cross_side_component(&self) -> TwoPhotonState {
        let mut out = Self::zero();
        for pair in ModePair::ALL {
            if pair.is_cross_side() {
                out.amps[pair.index()] = self.amps[pair.index()];
            }
        }
        out
    }

    pub fn normalized(&self) -> Result<TwoPhotonState> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut out = self.clone();
        for a in &mut out.amps {
            *a /= n;
        }
        Ok(out)
    }

    /// Canonical plain-text rendering: one line per mode pair, in
    /// canonical order, as `pair re im` with twelve significant digits.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for pair in ModePair::ALL {
            let a = self.amps[pair.index()];
            writeln!(out, "{} {} {}", pair, g12(a.re), g12(a.im)).expect("string write");
        }
        out
    }
}

/// Tensor product of the two single-photon preparations, one photon in
/// each arm. All four occupied pairs are cross-side, so no bosonic weight
/// appears: `amp(aP1, bP2) = amp_a(P1) amp_b(P2)`.
pub fn product_input_state(ja: &JonesVector, jb: &JonesVector) -> TwoPhotonState {
    use crate::modes::{Path, Polarization};
    let mut s = TwoPhotonState::zero();
    for p1 in Polarization::BOTH {
        for p2 in Polarization::BOTH {
            let pair = ModePair::new(
                ModeIndex::new(Path::A, p1),
                ModeIndex::new(Path::B, p2),
            );
            s.set_amplitude(pair, ja.amplitude(p1) * jb.amplitude(p2));
        }
    }
    s
}

/// Two labeled photons: amplitudes over the sixteen ordered mode pairs,
/// index `4 * first + second` in canonical mode order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishableTwoPhotonState {
    amps: [Complex64; 16],
}

impl DistinguishableTwoPhotonState {
    pub fn zero() -> Self {
        DistinguishableTwoPhotonState { amps: [Complex64::ZERO; 16] }
    }

    pub fn from_amplitudes(amps: [Complex64; 16]) -> Self {
        DistinguishableTwoPhotonState { amps }
    }

    /// Ordered tensor product of two single-photon amplitude vectors.
    pub fn tensor(first: &ModeAmplitudes, second: &ModeAmplitudes) -> Self {
        let mut s = Self::zero();
        for m1 in ModeIndex::ALL {
            for m2 in ModeIndex::ALL {
                s.amps[4 * m1.index() + m2.index()] = first.get(m1) * second.get(m2);
            }
        }
        s
    }

    /// Amplitude for photon one in `first` and photon two in `second`.
    pub fn amplitude(&self, first: ModeIndex, second: ModeIndex) -> Complex64 {
        self.amps[4 * first.index() + second.index()]
    }

    pub fn amplitudes(&self) -> &[Complex64; 16] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Projection onto the exchange-symmetric subspace, expressed in the
    /// bosonic pair basis. The result is sub-normalized unless the state
    /// was symmetric to begin with; for one photon per arm the symmetric
    /// component always carries half the weight.
    pub fn symmetrized(&self) -> TwoPhotonState {
        let mut out = TwoPhotonState::zero();
        for pair in ModePair::ALL {
            let (m1, m2) = (pair.first(), pair.second());
            let amp = if m1 == m2 {
                self.amplitude(m1, m1)
            } else {
                (self.amplitude(m1, m2) + self.amplitude(m2, m1)) / 2.0f64.sqrt()
            };
            out.set_amplitude(pair, amp);
        }
        out
    }
}
