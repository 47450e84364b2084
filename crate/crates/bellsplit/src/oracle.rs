//! Brute-force second-quantized propagation, kept independent of the
//! engine as a ground truth.
//!
//! A photon is a degree-1 polynomial in mode creation operators; an
//! optical element is a substitution rule sending each operator to a
//! linear combination. Propagation substitutes, multiplies the two
//! photons' polynomials, and collects monomials. Nothing here touches
//! the engine's lifted matrices: the only shared pieces are the
//! splitter parameters and the basis indexing, so agreement between the
//! two routes checks the algebra, not the plumbing.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bs::{BeamSplitterParams, TransmissionSign};
use crate::circuit::propagate;
use crate::error::{Error, Result};
use crate::jones::{JonesVector, PolarizationRotation};
use crate::modes::{ModeIndex, ModePair, Path, Polarization};
use crate::state::TwoPhotonState;
use crate::CROSS_CHECK_TOL;

/// A product of at most two creation operators (commuting, so pairs are
/// kept sorted).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModeMonomial {
    Unit,
    Single(ModeIndex),
    Pair(ModeIndex, ModeIndex),
}

impl ModeMonomial {
    fn pair(m1: ModeIndex, m2: ModeIndex) -> ModeMonomial {
        if m2 < m1 {
            ModeMonomial::Pair(m2, m1)
        } else {
            ModeMonomial::Pair(m1, m2)
        }
    }

    fn degree(self) -> usize {
        match self {
            ModeMonomial::Unit => 0,
            ModeMonomial::Single(_) => 1,
            ModeMonomial::Pair(..) => 2,
        }
    }
}

/// Sparse polynomial in creation operators, degree at most two.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CreationPolynomial {
    terms: BTreeMap<ModeMonomial, Complex64>,
}

impl CreationPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The operator creating one photon in a single mode.
    pub fn single_photon(mode: ModeIndex, amplitude: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(ModeMonomial::Single(mode), amplitude);
        p
    }

    /// One photon on the given path with the given polarization state.
    pub fn from_jones(path: Path, j: &JonesVector) -> Self {
        let mut p = Self::zero();
        for pol in Polarization::BOTH {
            p.add_term(ModeMonomial::Single(ModeIndex::new(path, pol)), j.amplitude(pol));
        }
        p
    }

    fn add_term(&mut self, monomial: ModeMonomial, coefficient: Complex64) {
        if coefficient == Complex64::ZERO {
            return;
        }
        *self.terms.entry(monomial).or_insert(Complex64::ZERO) += coefficient;
    }

    /// Substitutes every creation operator by its image under a linear
    /// element. The image function returns the output-mode expansion of
    /// one input mode.
    pub fn map_modes<F>(&self, image: F) -> Self
    where
        F: Fn(ModeIndex) -> Vec<(ModeIndex, Complex64)>,
    {
        let mut out = Self::zero();
        for (monomial, coeff) in &self.terms {
            match *monomial {
                ModeMonomial::Unit => out.add_term(ModeMonomial::Unit, *coeff),
                ModeMonomial::Single(m) => {
                    for (m_out, w) in image(m) {
                        out.add_term(ModeMonomial::Single(m_out), coeff * w);
                    }
                }
                ModeMonomial::Pair(m1, m2) => {
                    for (o1, w1) in image(m1) {
                        for (o2, w2) in image(m2) {
                            out.add_term(ModeMonomial::pair(o1, o2), coeff * w1 * w2);
                        }
                    }
                }
            }
        }
        out
    }

    /// Operator product. Fails if any resulting monomial would exceed
    /// two photons.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.degree() + m2.degree() > 2 {
                    return Err(Error::DegreeOverflow);
                }
                let monomial = match (*m1, *m2) {
                    (ModeMonomial::Unit, m) | (m, ModeMonomial::Unit) => m,
                    (ModeMonomial::Single(a), ModeMonomial::Single(b)) => ModeMonomial::pair(a, b),
                    _ => unreachable!("degree checked above"),
                };
                out.add_term(monomial, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Reads the degree-2 part as a state. Acting on vacuum, (x,p)^2
    /// creates sqrt(2) times the normalized two-quanta ket, so diagonal
    /// monomial coefficients pick up that factor.
    pub fn to_two_photon_state(&self) -> TwoPhotonState {
        let sqrt2 = 2.0f64.sqrt();
        let mut s = TwoPhotonState::zero();
        for (monomial, coeff) in &self.terms {
            if let ModeMonomial::Pair(m1, m2) = *monomial {
                let weight = if m1 == m2 { sqrt2 } else { 1.0 };
                s.set_amplitude(ModePair::new(m1, m2), coeff * weight);
            }
        }
        s
    }
}

/// Substitution rule for the splitter: reflection keeps the path with a
/// real weight, transmission crosses it with weight i·s·t_p, and
/// polarization rides along untouched.
fn beam_splitter_images(bs: &BeamSplitterParams) -> impl Fn(ModeIndex) -> Vec<(ModeIndex, Complex64)> + '_ {
    move |mode: ModeIndex| {
        let r = Complex64::new(bs.r(mode.pol), 0.0);
        let t = bs.sign().factor() * bs.t(mode.pol);
        vec![
            (mode, r),
            (ModeIndex::new(mode.path.other(), mode.pol), t),
        ]
    }
}

/// Substitution rule for a polarization rotation confined to one path.
fn rotation_images<'a>(
    path: Path,
    rot: &'a PolarizationRotation,
) -> impl Fn(ModeIndex) -> Vec<(ModeIndex, Complex64)> + 'a {
    move |mode: ModeIndex| {
        if mode.path != path {
            return vec![(mode, Complex64::ONE)];
        }
        Polarization::BOTH
            .into_iter()
            .map(|out| (ModeIndex::new(path, out), rot.entry(out, mode.pol)))
            .collect()
    }
}

/// Propagates both photons through rotations and the splitter by
/// operator substitution and expands the product.
pub fn oracle_propagate(
    ja: &JonesVector,
    jb: &JonesVector,
    bs: &BeamSplitterParams,
    rot_a: &PolarizationRotation,
    rot_b: &PolarizationRotation,
) -> TwoPhotonState {
    let through = |p: CreationPolynomial| {
        p.map_modes(rotation_images(Path::A, rot_a))
            .map_modes(rotation_images(Path::B, rot_b))
            .map_modes(beam_splitter_images(bs))
    };
    let pa = through(CreationPolynomial::from_jones(Path::A, ja));
    let pb = through(CreationPolynomial::from_jones(Path::B, jb));
    pa.mul(&pb)
        .expect("two degree-1 polynomials stay within two photons")
        .to_two_photon_state()
}

pub(crate) fn random_jones(rng: &mut impl Rng) -> JonesVector {
    let u: f64 = rng.gen();
    let p1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let p2 = rng.gen_range(0.0..std::f64::consts::TAU);
    JonesVector::new(
        Complex64::from_polar(u.sqrt(), p1),
        Complex64::from_polar((1.0 - u).sqrt(), p2),
    )
    .expect("draw is normalized")
}

pub(crate) fn random_rotation(rng: &mut impl Rng) -> PolarizationRotation {
    let u: f64 = rng.gen();
    let (s, c) = (u.sqrt().asin()).sin_cos();
    let p1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let p2 = rng.gen_range(0.0..std::f64::consts::TAU);
    let e1 = Complex64::from_polar(1.0, p1);
    let e2 = Complex64::from_polar(1.0, p2);
    PolarizationRotation::new([
        [c * e1, -s * e2],
        [s * e2.conj(), c * e1.conj()],
    ])
    .expect("draw is unitary")
}

pub(crate) fn random_beam_splitter(rng: &mut impl Rng) -> BeamSplitterParams {
    let r_v_sq: f64 = rng.gen_range(0.05..0.95);
    let r_h_sq: f64 = rng.gen_range(0.05..0.95);
    let sign = if rng.gen_bool(0.5) {
        TransmissionSign::PlusI
    } else {
        TransmissionSign::MinusI
    };
    BeamSplitterParams::new(r_v_sq.sqrt(), r_h_sq.sqrt(), sign).expect("draw is in range")
}

/// Result of comparing the engine against the oracle over random draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub draws: usize,
    pub seed: u64,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "oracle equivalence: {} draws, seed {}, max |amplitude difference| = {:.3e} (tolerance {:.0e}): {}",
            self.draws,
            self.seed,
            self.max_deviation,
            self.tolerance,
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

/// Compares engine and oracle amplitudes over seeded random scenarios:
/// Jones vectors uniform on the sphere with independent phases, both
/// reflectances drawn with r^2 uniform in [0.05, 0.95], random
/// transmission sign, and random per-path rotations.
pub fn oracle_equivalence_suite(n_draws: usize, seed: u64) -> Result<OracleReport> {
    if n_draws == 0 {
        return Err(Error::NoDraws);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..n_draws {
        let ja = random_jones(&mut rng);
        let jb = random_jones(&mut rng);
        let rot_a = random_rotation(&mut rng);
        let rot_b = random_rotation(&mut rng);
        let bs = random_beam_splitter(&mut rng);
        let engine = propagate(&ja, &jb, &rot_a, &rot_b, &bs);
        let oracle = oracle_propagate(&ja, &jb, &bs, &rot_a, &rot_b);
        for pair in ModePair::ALL {
            let d = (engine.amplitude(pair) - oracle.amplitude(pair)).norm();
            max_deviation = max_deviation.max(d);
        }
    }
    Ok(OracleReport {
        draws: n_draws,
        seed,
        max_deviation,
        tolerance: CROSS_CHECK_TOL,
    })
}
