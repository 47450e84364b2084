//! Labels for the four optical modes (two spatial paths crossed with two
//! linear polarizations) and for unordered pairs of them.
//!
//! The canonical single-mode order is `aH < aV < bH < bV`. Two-photon
//! basis kets are unordered mode pairs, enumerated lexicographically:
//! `(aH,aH), (aH,aV), (aH,bH), (aH,bV), (aV,aV), (aV,bH), (aV,bV),
//! (bH,bH), (bH,bV), (bV,bV)`.

use std::fmt;

use num_complex::Complex64;

/// One of the two spatial arms entering (and leaving) the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    A = 0,
    B = 1,
}

impl Path {
    pub const BOTH: [Path; 2] = [Path::A, Path::B];

    pub fn other(self) -> Path {
        match self {
            Path::A => Path::B,
            Path::B => Path::A,
        }
    }

    pub fn label(self) -> char {
        match self {
            Path::A => 'a',
            Path::B => 'b',
        }
    }
}

/// Linear polarization label. `H` sorts before `V`, matching the
/// canonical mode order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H = 0,
    V = 1,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::H, Polarization::V];

    pub fn label(self) -> char {
        match self {
            Polarization::H => 'H',
            Polarization::V => 'V',
        }
    }
}

/// One of the four optical modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub path: Path,
    pub pol: Polarization,
}

impl ModeIndex {
    pub const COUNT: usize = 4;

    pub const A_H: ModeIndex = ModeIndex::new(Path::A, Polarization::H);
    pub const A_V: ModeIndex = ModeIndex::new(Path::A, Polarization::V);
    pub const B_H: ModeIndex = ModeIndex::new(Path::B, Polarization::H);
    pub const B_V: ModeIndex = ModeIndex::new(Path::B, Polarization::V);

    pub const ALL: [ModeIndex; 4] = [Self::A_H, Self::A_V, Self::B_H, Self::B_V];

    pub const fn new(path: Path, pol: Polarization) -> Self {
        ModeIndex { path, pol }
    }

    /// Position in the canonical order `aH, aV, bH, bV`.
    pub const fn index(self) -> usize {
        self.path as usize * 2 + self.pol as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.path.label(), self.pol.label())
    }
}

/// An unordered pair of modes; the basis label of a two-photon ket.
/// The stored order is always `first() <= second()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModePair {
    first: ModeIndex,
    second: ModeIndex,
}

/// Offset of the block of pairs starting at a given first mode.
const PAIR_OFFSET: [usize; 4] = [0, 4, 7, 9];

impl ModePair {
    pub const COUNT: usize = 10;

    pub const ALL: [ModePair; 10] = [
        ModePair { first: ModeIndex::A_H, second: ModeIndex::A_H },
        ModePair { first: ModeIndex::A_H, second: ModeIndex::A_V },
        ModePair { first: ModeIndex::A_H, second: ModeIndex::B_H },
        ModePair { first: ModeIndex::A_H, second: ModeIndex::B_V },
        ModePair { first: ModeIndex::A_V, second: ModeIndex::A_V },
        ModePair { first: ModeIndex::A_V, second: ModeIndex::B_H },
        ModePair { first: ModeIndex::A_V, second: ModeIndex::B_V },
        ModePair { first: ModeIndex::B_H, second: ModeIndex::B_H },
        ModePair { first: ModeIndex::B_H, second: ModeIndex::B_V },
        ModePair { first: ModeIndex::B_V, second: ModeIndex::B_V },
    ];

    pub fn new(m1: ModeIndex, m2: ModeIndex) -> Self {
        if m1 <= m2 {
            ModePair { first: m1, second: m2 }
        } else {
            ModePair { first: m2, second: m1 }
        }
    }

    pub fn first(self) -> ModeIndex {
        self.first
    }

    pub fn second(self) -> ModeIndex {
        self.second
    }

    /// Position in the canonical lexicographic enumeration.
    pub fn index(self) -> usize {
        let (lo, hi) = (self.first.index(), self.second.index());
        PAIR_OFFSET[lo] + (hi - lo)
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    /// Both photons in the same mode.
    pub fn is_doubly_occupied(self) -> bool {
        self.first == self.second
    }

    /// One photon in each output arm.
    pub fn is_cross_side(self) -> bool {
        self.first.path != self.second.path
    }

    pub fn is_same_side(self) -> bool {
        !self.is_cross_side()
    }
}

impl fmt::Display for ModePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.first, self.second)
    }
}

/// Amplitudes of a single photon over the four modes, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeAmplitudes([Complex64; 4]);

impl ModeAmplitudes {
    pub fn zero() -> Self {
        ModeAmplitudes([Complex64::ZERO; 4])
    }

    pub fn from_array(amps: [Complex64; 4]) -> Self {
        ModeAmplitudes(amps)
    }

    pub fn get(&self, m: ModeIndex) -> Complex64 {
        self.0[m.index()]
    }

    pub fn set(&mut self, m: ModeIndex, value: Complex64) {
        self.0[m.index()] = value;
    }

    pub fn as_array(&self) -> &[Complex64; 4] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}
