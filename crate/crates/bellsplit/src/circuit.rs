//! Propagation of the two-photon state through the optical pipeline:
//! per-path polarization rotations followed by the beam splitter.
//!
//! One-photon mode maps are lifted to the ten-dimensional bosonic pair
//! space by [`symmetric_pair_matrix`]. The lift is a homomorphism, so
//! rotations and the splitter may be applied sequentially or as one
//! composed map with identical results.

use num_complex::Complex64;

use crate::bs::BeamSplitterParams;
use crate::error::{Error, Result};
use crate::jones::{JonesVector, PolarizationRotation};
use crate::modes::{ModeAmplitudes, ModeIndex, ModePair, Path, Polarization};
use crate::state::{product_input_state, DistinguishableTwoPhotonState, TwoPhotonState};
use crate::EXACT_TOL;

/// One-photon linear map over the four modes, row = output, col = input.
pub type ModeMatrix = [[Complex64; 4]; 4];

fn identity4() -> ModeMatrix {
    let mut u = [[Complex64::ZERO; 4]; 4];
    for (k, row) in u.iter_mut().enumerate() {
        row[k] = Complex64::ONE;
    }
    u
}

pub(crate) fn matmul4(a: &ModeMatrix, b: &ModeMatrix) -> ModeMatrix {
    let mut out = [[Complex64::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn apply_mode_matrix(u: &ModeMatrix, v: &ModeAmplitudes) -> ModeAmplitudes {
    let mut out = ModeAmplitudes::zero();
    for row in ModeIndex::ALL {
        let amp = ModeIndex::ALL
            .iter()
            .map(|col| u[row.index()][col.index()] * v.get(*col))
            .sum();
        out.set(row, amp);
    }
    out
}

/// Lift of a one-photon map to the bosonic pair basis. The entry for
/// output pair {p,q} and input pair {n1,n2} is the permanent of the
/// corresponding 2x2 submatrix divided by sqrt(1+d_pq)·sqrt(1+d_n1n2);
/// the square roots carry the bosonic weight of doubly occupied kets.
pub fn symmetric_pair_matrix(u: &ModeMatrix) -> [[Complex64; 10]; 10] {
    let sqrt2 = 2.0f64.sqrt();
    let mut m = [[Complex64::ZERO; 10]; 10];
    for out_pair in ModePair::ALL {
        let (p, q) = (out_pair.first().index(), out_pair.second().index());
        let w_out = if p == q { sqrt2 } else { 1.0 };
        for in_pair in ModePair::ALL {
            let (n1, n2) = (in_pair.first().index(), in_pair.second().index());
            let w_in = if n1 == n2 { sqrt2 } else { 1.0 };
            let perm = u[p][n1] * u[q][n2] + u[p][n2] * u[q][n1];
            m[out_pair.index()][in_pair.index()] = perm / (w_out * w_in);
        }
    }
    m
}

/// Applies a one-photon unitary to both photons at once.
pub fn apply_single_photon_unitary(state: &TwoPhotonState, u: &ModeMatrix) -> TwoPhotonState {
    let m = symmetric_pair_matrix(u);
    let a = state.amplitudes();
    let mut out = [Complex64::ZERO; 10];
    for (slot, row) in out.iter_mut().zip(m.iter()) {
        *slot = row.iter().zip(a.iter()).map(|(x, y)| x * y).sum();
    }
    TwoPhotonState::from_amplitudes(out)
}

pub fn apply_beam_splitter(state: &TwoPhotonState, bs: &BeamSplitterParams) -> TwoPhotonState {
    apply_single_photon_unitary(state, &bs.single_photon_matrix())
}

/// One-photon matrix of a polarization rotation confined to one path.
pub fn rotation_mode_matrix(path: Path, rot: &PolarizationRotation) -> ModeMatrix {
    let mut u = identity4();
    for out_pol in Polarization::BOTH {
        for in_pol in Polarization::BOTH {
            let row = ModeIndex::new(path, out_pol).index();
            let col = ModeIndex::new(path, in_pol).index();
            u[row][col] = rot.entry(out_pol, in_pol);
        }
    }
    u
}

pub fn apply_polarization_rotation(
    state: &TwoPhotonState,
    path: Path,
    rot: &PolarizationRotation,
) -> TwoPhotonState {
    apply_single_photon_unitary(state, &rotation_mode_matrix(path, rot))
}

/// Full pipeline for indistinguishable photons: one photon per arm,
/// per-path rotations, then the splitter.
pub fn propagate(
    ja: &JonesVector,
    jb: &JonesVector,
    rot_a: &PolarizationRotation,
    rot_b: &PolarizationRotation,
    bs: &BeamSplitterParams,
) -> TwoPhotonState {
    let mut s = product_input_state(ja, jb);
    s = apply_polarization_rotation(&s, Path::A, rot_a);
    s = apply_polarization_rotation(&s, Path::B, rot_b);
    apply_beam_splitter(&s, bs)
}

/// Propagates two fully distinguishable (labeled) photons: each evolves
/// independently under the one-photon map, with no exchange term.
pub fn distinguishable_propagate(
    ja: &JonesVector,
    jb: &JonesVector,
    bs: &BeamSplitterParams,
) -> DistinguishableTwoPhotonState {
    let u = bs.single_photon_matrix();
    let psi1 = apply_mode_matrix(&u, &ja.mode_amplitudes(Path::A));
    let psi2 = apply_mode_matrix(&u, &jb.mode_amplitudes(Path::B));
    DistinguishableTwoPhotonState::tensor(&psi1, &psi2)
}

/// The two standard preparation arrangements: both arms diagonal, or
/// one arm diagonal and the other antidiagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellCase {
    One,
    Two,
}

impl BellCase {
    /// Numeric id used in config files and CSV rows.
    pub fn id(self) -> u8 {
        match self {
            BellCase::One => 1,
            BellCase::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preparation {
    Case(BellCase),
    Custom,
}

/// A complete scenario: input preparations, optional rotations, the
/// splitter, and the temporal-overlap parameter.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    ja: JonesVector,
    jb: JonesVector,
    rot_a: PolarizationRotation,
    rot_b: PolarizationRotation,
    bs: BeamSplitterParams,
    gamma: f64,
    eps: f64,
    eps_prime: f64,
    prep: Preparation,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) || gamma.is_nan() {
        return Err(Error::OutOfRange {
            name: "gamma",
            value: gamma,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

impl ScenarioConfig {
    /// Free-form preparation: explicit Jones vectors, identity rotations.
    pub fn custom(
        ja: JonesVector,
        jb: JonesVector,
        bs: BeamSplitterParams,
        gamma: f64,
    ) -> Result<Self> {
        Self::from_fields(ja, jb, bs, gamma, 0.0, 0.0, Preparation::Custom)
    }

    pub(crate) fn from_fields(
        ja: JonesVector,
        jb: JonesVector,
        bs: BeamSplitterParams,
        gamma: f64,
        eps: f64,
        eps_prime: f64,
        prep: Preparation,
    ) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(ScenarioConfig {
            ja,
            jb,
            rot_a: PolarizationRotation::identity(),
            rot_b: PolarizationRotation::identity(),
            bs,
            gamma,
            eps,
            eps_prime,
            prep,
        })
    }

    pub fn with_rotations(mut self, rot_a: PolarizationRotation, rot_b: PolarizationRotation) -> Self {
        self.rot_a = rot_a;
        self.rot_b = rot_b;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        self.gamma = gamma;
        Ok(self)
    }

    pub fn ja(&self) -> &JonesVector {
        &self.ja
    }

    pub fn jb(&self) -> &JonesVector {
        &self.jb
    }

    pub fn rot_a(&self) -> &PolarizationRotation {
        &self.rot_a
    }

    pub fn rot_b(&self) -> &PolarizationRotation {
        &self.rot_b
    }

    pub fn beam_splitter(&self) -> &BeamSplitterParams {
        &self.bs
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn eps_prime(&self) -> f64 {
        self.eps_prime
    }

    pub fn preparation(&self) -> Preparation {
        self.prep
    }

    /// Structural diagnostics for case preparations. The coincidence
    /// classification assumes equal, nonzero contrast r_p^2 - t_p^2 for
    /// both polarizations; configurations violating that still simulate
    /// fine but the case's discrimination claim does not apply.
    pub fn warnings(&self) -> Vec<ScenarioWarning> {
        let mut out = Vec::new();
        if let Preparation::Case(_) = self.prep {
            let cv = self.bs.contrast(Polarization::V);
            let ch = self.bs.contrast(Polarization::H);
            if cv.abs() <= EXACT_TOL && ch.abs() <= EXACT_TOL {
                out.push(ScenarioWarning::DegenerateCrossSide);
            } else if (cv - ch).abs() > EXACT_TOL {
                out.push(ScenarioWarning::ContrastMismatch);
            }
        }
        out
    }
}

impl Default for ScenarioConfig {
    /// Case 1 on a 60:40 nonpolarizing splitter, fully indistinguishable.
    fn default() -> Self {
        ScenarioConfig {
            ja: JonesVector::diagonal(),
            jb: JonesVector::diagonal(),
            rot_a: PolarizationRotation::identity(),
            rot_b: PolarizationRotation::identity(),
            bs: BeamSplitterParams::from_r_squared(0.6, Default::default())
                .expect("0.6 is a valid reflectance"),
            gamma: 1.0,
            eps: 0.0,
            eps_prime: 0.0,
            prep: Preparation::Case(BellCase::One),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioWarning {
    /// Symmetric splitter: both contrasts vanish, so the coefficients the
    /// case arrangement is designed to produce are zero.
    DegenerateCrossSide,
    /// Contrasts differ between polarizations; the detector-pattern to
    /// Bell-state mapping assumes they are equal.
    ContrastMismatch,
}

impl std::fmt::Display for ScenarioWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScenarioWarning::DegenerateCrossSide => write!(
                f,
                "symmetric splitter (r^2 = t^2): the case's target coefficients vanish \
                 and coincidence classification is degenerate"
            ),
            ScenarioWarning::ContrastMismatch => write!(
                f,
                "polarization contrasts differ (r_v^2 - t_v^2 != r_h^2 - t_h^2): \
                 coincidence classification assumes equal contrasts"
            ),
        }
    }
}

/// Interfering and non-interfering branches of a partially
/// distinguishable pair; downstream statistics mix with weight
/// `interference_weight` on the interfering branch.
#[derive(Debug, Clone)]
pub struct StateMixture {
    pub interfering: TwoPhotonState,
    pub classical: DistinguishableTwoPhotonState,
    pub interference_weight: f64,
}

// Outputs are built once per evaluation and never stored in bulk, so the
// size imbalance between the variants is not worth a box.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum ScenarioOutput {
    Pure(TwoPhotonState),
    Mixture(StateMixture),
}

impl ScenarioOutput {
    /// The fully interfering branch; for a pure output, the state itself.
    pub fn interfering_state(&self) -> &TwoPhotonState {
        match self {
            ScenarioOutput::Pure(s) => s,
            ScenarioOutput::Mixture(m) => &m.interfering,
        }
    }
}

/// Runs the pipeline. Perfect temporal overlap yields the pure bosonic
/// output; otherwise both branches are returned for statistics-level
/// mixing with weight gamma^2 on the interfering one.
pub fn simulate_scenario(config: &ScenarioConfig) -> ScenarioOutput {
    let interfering = propagate(
        config.ja(),
        config.jb(),
        config.rot_a(),
        config.rot_b(),
        config.beam_splitter(),
    );
    if config.gamma() == 1.0 {
        return ScenarioOutput::Pure(interfering);
    }
    // A rotation acts before the splitter on a photon confined to one
    // path, so it reduces to a Jones-vector rotation.
    let ja = config.rot_a().apply(config.ja());
    let jb = config.rot_b().apply(config.jb());
    let classical = distinguishable_propagate(&ja, &jb, config.beam_splitter());
    ScenarioOutput::Mixture(StateMixture {
        interfering,
        classical,
        interference_weight: config.gamma() * config.gamma(),
    })
}
