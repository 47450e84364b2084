//! Bell decomposition of the splitter output, coincidence statistics,
//! the two standard preparation arrangements, and fidelity under
//! preparation errors.
//!
//! The cross-side (one photon per arm) block of the pair basis carries
//! the entanglement; it is spanned by four Bell states:
//!
//! ```text
//! Phi+- = (|aH,bH> +- |aV,bV>) / sqrt(2)
//! Psi+- = (|aV,bH> +- |aH,bV>) / sqrt(2)
//! ```
//!
//! With both photons prepared diagonally (Case 1) the output is a
//! superposition of Phi+ and Psi+ only; flipping the sign of the H
//! amplitude on arm b (Case 2) selects Phi- and Psi- instead. A
//! polarizing splitter plus two detectors per arm then discriminates the
//! two surviving states by which detector pair fires.

use num_complex::Complex64;

use crate::bs::BeamSplitterParams;
use crate::circuit::{simulate_scenario, BellCase, Preparation, ScenarioConfig, ScenarioOutput};
use crate::error::{Error, Result};
use crate::jones::JonesVector;
use crate::modes::{ModeIndex, ModePair, Polarization};
use crate::state::{DistinguishableTwoPhotonState, TwoPhotonState};
use crate::EXACT_TOL;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// One of the four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Φ (equal polarizations) versus Ψ (opposite polarizations).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellFamily {
    Phi,
    Psi,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn family(self) -> BellFamily {
        match self {
            BellKind::PhiPlus | BellKind::PhiMinus => BellFamily::Phi,
            BellKind::PsiPlus | BellKind::PsiMinus => BellFamily::Psi,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "Phi+",
            BellKind::PhiMinus => "Phi-",
            BellKind::PsiPlus => "Psi+",
            BellKind::PsiMinus => "Psi-",
        }
    }

    /// The Bell state a given arrangement produces in a given family:
    /// Case 1 yields the + pair, Case 2 the - pair.
    pub fn target(case: BellCase, family: BellFamily) -> BellKind {
        match (case, family) {
            (BellCase::One, BellFamily::Phi) => BellKind::PhiPlus,
            (BellCase::One, BellFamily::Psi) => BellKind::PsiPlus,
            (BellCase::Two, BellFamily::Phi) => BellKind::PhiMinus,
            (BellCase::Two, BellFamily::Psi) => BellKind::PsiMinus,
        }
    }
}

impl std::fmt::Display for BellKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn cross_pair(a_pol: Polarization, b_pol: Polarization) -> ModePair {
    ModePair::new(
        ModeIndex::new(crate::modes::Path::A, a_pol),
        ModeIndex::new(crate::modes::Path::B, b_pol),
    )
}

/// The Bell state embedded in the two-photon pair basis.
pub fn target_state(kind: BellKind) -> TwoPhotonState {
    use Polarization::{H, V};
    let mut s = TwoPhotonState::zero();
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match kind {
        BellKind::PhiPlus => {
            s.set_amplitude(cross_pair(H, H), w);
            s.set_amplitude(cross_pair(V, V), w);
        }
        BellKind::PhiMinus => {
            s.set_amplitude(cross_pair(H, H), w);
            s.set_amplitude(cross_pair(V, V), -w);
        }
        BellKind::PsiPlus => {
            s.set_amplitude(cross_pair(V, H), w);
            s.set_amplitude(cross_pair(H, V), w);
        }
        BellKind::PsiMinus => {
            s.set_amplitude(cross_pair(V, H), w);
            s.set_amplitude(cross_pair(H, V), -w);
        }
    }
    s
}

fn same_side_pairs() -> impl Iterator<Item = ModePair> {
    ModePair::ALL.into_iter().filter(|p| p.is_same_side())
}

/// Amplitudes of the output in the Bell basis plus the six same-side
/// residuals (in canonical pair order). Together they are just a basis
/// rotation of the ten pair amplitudes, so the norm is unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct BellCoefficients {
    pub c_phi_plus: Complex64,
    pub c_phi_minus: Complex64,
    pub c_psi_plus: Complex64,
    pub c_psi_minus: Complex64,
    pub bunched: [Complex64; 6],
}

impl BellCoefficients {
    pub fn coefficient(&self, kind: BellKind) -> Complex64 {
        match kind {
            BellKind::PhiPlus => self.c_phi_plus,
            BellKind::PhiMinus => self.c_phi_minus,
            BellKind::PsiPlus => self.c_psi_plus,
            BellKind::PsiMinus => self.c_psi_minus,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        BellKind::ALL
            .iter()
            .map(|k| self.coefficient(*k).norm_sqr())
            .sum::<f64>()
            + self.bunched.iter().map(Complex64::norm_sqr).sum::<f64>()
    }

    /// Maps the coefficients back to pair-basis amplitudes.
    pub fn reconstruct(&self) -> TwoPhotonState {
        use Polarization::{H, V};
        let mut s = TwoPhotonState::zero();
        s.set_amplitude(cross_pair(H, H), (self.c_phi_plus + self.c_phi_minus) / SQRT_2);
        s.set_amplitude(cross_pair(V, V), (self.c_phi_plus - self.c_phi_minus) / SQRT_2);
        s.set_amplitude(cross_pair(V, H), (self.c_psi_plus + self.c_psi_minus) / SQRT_2);
        s.set_amplitude(cross_pair(H, V), (self.c_psi_plus - self.c_psi_minus) / SQRT_2);
        for (pair, amp) in same_side_pairs().zip(self.bunched.iter()) {
            s.set_amplitude(pair, *amp);
        }
        s
    }
}

/// Projects a state onto the Bell basis (cross-side block) and reads off
/// the same-side residuals.
pub fn bell_decompose(s: &TwoPhotonState) -> BellCoefficients {
    use Polarization::{H, V};
    let hh = s.amplitude(cross_pair(H, H));
    let vv = s.amplitude(cross_pair(V, V));
    let vh = s.amplitude(cross_pair(V, H));
    let hv = s.amplitude(cross_pair(H, V));
    let mut bunched = [Complex64::ZERO; 6];
    for (slot, pair) in bunched.iter_mut().zip(same_side_pairs()) {
        *slot = s.amplitude(pair);
    }
    BellCoefficients {
        c_phi_plus: (hh + vv) / SQRT_2,
        c_phi_minus: (hh - vv) / SQRT_2,
        c_psi_plus: (vh + hv) / SQRT_2,
        c_psi_minus: (vh - hv) / SQRT_2,
        bunched,
    }
}

/// Bell coefficients straight from the input amplitudes, without
/// propagating a state. With contrasts D_p = r_p^2 - t_p^2:
///
/// ```text
/// c_Phi+ = (a a' D_v + b b' D_h) / sqrt(2)
/// c_Phi- = (b b' D_h - a a' D_v) / sqrt(2)
/// c_Psi+ = (a b' + b a') (r_v r_h - t_v t_h) / sqrt(2)
/// c_Psi- = (a b' - b a') (r_v r_h + t_v t_h) / sqrt(2)
/// ```
///
/// where (a, b) and (a', b') are the V/H amplitudes on arms a and b.
pub fn bell_coefficients_closed_form(
    ja: &JonesVector,
    jb: &JonesVector,
    bs: &BeamSplitterParams,
) -> BellCoefficients {
    let (alpha, beta) = (ja.alpha(), ja.beta());
    let (alpha_p, beta_p) = (jb.alpha(), jb.beta());
    let (rv, tv) = (bs.r_v(), bs.t_v());
    let (rh, th) = (bs.r_h(), bs.t_h());
    let dv = bs.contrast(Polarization::V);
    let dh = bs.contrast(Polarization::H);
    let it = bs.sign().factor();

    let aa = alpha * alpha_p;
    let bb = beta * beta_p;
    let ab = alpha * beta_p;
    let ba = beta * alpha_p;

    // Same-side residuals in canonical pair order:
    // (aH,aH), (aH,aV), (aV,aV), (bH,bH), (bH,bV), (bV,bV).
    let bunched = [
        it * bb * (SQRT_2 * rh * th),
        it * (ab * (rv * th) + ba * (rh * tv)),
        it * aa * (SQRT_2 * rv * tv),
        it * bb * (SQRT_2 * rh * th),
        it * (ab * (rh * tv) + ba * (rv * th)),
        it * aa * (SQRT_2 * rv * tv),
    ];

    BellCoefficients {
        c_phi_plus: (aa * dv + bb * dh) / SQRT_2,
        c_phi_minus: (bb * dh - aa * dv) / SQRT_2,
        c_psi_plus: (ab + ba) * ((rv * rh - tv * th) / SQRT_2),
        c_psi_minus: (ab - ba) * ((rv * rh + tv * th) / SQRT_2),
        bunched,
    }
}

/// Detector-level probabilities after the polarizing splitters: four
/// cross-side coincidences, two same-side cross-polarization
/// coincidences, four double counts. The ten entries sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionStats {
    pub p_ah_bh: f64,
    pub p_ah_bv: f64,
    pub p_av_bh: f64,
    pub p_av_bv: f64,
    pub p_av_ah: f64,
    pub p_bv_bh: f64,
    pub p_ah2: f64,
    pub p_av2: f64,
    pub p_bh2: f64,
    pub p_bv2: f64,
    /// Sum of the four cross-side coincidence probabilities.
    pub p_coincidence_total: f64,
}

impl DetectionStats {
    pub fn from_pure_state(s: &TwoPhotonState) -> Self {
        use Polarization::{H, V};
        let p = |pair: ModePair| s.amplitude(pair).norm_sqr();
        let double = |m: ModeIndex| p(ModePair::new(m, m));
        let stats = DetectionStats {
            p_ah_bh: p(cross_pair(H, H)),
            p_ah_bv: p(cross_pair(H, V)),
            p_av_bh: p(cross_pair(V, H)),
            p_av_bv: p(cross_pair(V, V)),
            p_av_ah: p(ModePair::new(ModeIndex::A_H, ModeIndex::A_V)),
            p_bv_bh: p(ModePair::new(ModeIndex::B_H, ModeIndex::B_V)),
            p_ah2: double(ModeIndex::A_H),
            p_av2: double(ModeIndex::A_V),
            p_bh2: double(ModeIndex::B_H),
            p_bv2: double(ModeIndex::B_V),
            p_coincidence_total: 0.0,
        };
        stats.with_total()
    }

    /// Labeled photons: both orders of each detector pair contribute.
    pub fn from_distinguishable(d: &DistinguishableTwoPhotonState) -> Self {
        let both = |m1: ModeIndex, m2: ModeIndex| {
            d.amplitude(m1, m2).norm_sqr() + d.amplitude(m2, m1).norm_sqr()
        };
        let stats = DetectionStats {
            p_ah_bh: both(ModeIndex::A_H, ModeIndex::B_H),
            p_ah_bv: both(ModeIndex::A_H, ModeIndex::B_V),
            p_av_bh: both(ModeIndex::A_V, ModeIndex::B_H),
            p_av_bv: both(ModeIndex::A_V, ModeIndex::B_V),
            p_av_ah: both(ModeIndex::A_H, ModeIndex::A_V),
            p_bv_bh: both(ModeIndex::B_H, ModeIndex::B_V),
            p_ah2: d.amplitude(ModeIndex::A_H, ModeIndex::A_H).norm_sqr(),
            p_av2: d.amplitude(ModeIndex::A_V, ModeIndex::A_V).norm_sqr(),
            p_bh2: d.amplitude(ModeIndex::B_H, ModeIndex::B_H).norm_sqr(),
            p_bv2: d.amplitude(ModeIndex::B_V, ModeIndex::B_V).norm_sqr(),
            p_coincidence_total: 0.0,
        };
        stats.with_total()
    }

    /// Convex mixture: `weight` on `self`, `1 - weight` on `other`.
    pub fn mix(&self, other: &DetectionStats, weight: f64) -> DetectionStats {
        let w = weight;
        let v = 1.0 - weight;
        DetectionStats {
            p_ah_bh: w * self.p_ah_bh + v * other.p_ah_bh,
            p_ah_bv: w * self.p_ah_bv + v * other.p_ah_bv,
            p_av_bh: w * self.p_av_bh + v * other.p_av_bh,
            p_av_bv: w * self.p_av_bv + v * other.p_av_bv,
            p_av_ah: w * self.p_av_ah + v * other.p_av_ah,
            p_bv_bh: w * self.p_bv_bh + v * other.p_bv_bh,
            p_ah2: w * self.p_ah2 + v * other.p_ah2,
            p_av2: w * self.p_av2 + v * other.p_av2,
            p_bh2: w * self.p_bh2 + v * other.p_bh2,
            p_bv2: w * self.p_bv2 + v * other.p_bv2,
            p_coincidence_total: w * self.p_coincidence_total + v * other.p_coincidence_total,
        }
    }

    pub fn from_output(output: &ScenarioOutput) -> Self {
        match output {
            ScenarioOutput::Pure(s) => Self::from_pure_state(s),
            ScenarioOutput::Mixture(m) => Self::from_pure_state(&m.interfering).mix(
                &Self::from_distinguishable(&m.classical),
                m.interference_weight,
            ),
        }
    }

    fn with_total(mut self) -> Self {
        self.p_coincidence_total = self.p_ah_bh + self.p_ah_bv + self.p_av_bh + self.p_av_bv;
        self
    }

    pub fn same_side_total(&self) -> f64 {
        self.p_av_ah + self.p_bv_bh + self.p_ah2 + self.p_av2 + self.p_bh2 + self.p_bv2
    }

    /// Sum of all ten event probabilities; one for any physical input.
    pub fn sum(&self) -> f64 {
        self.p_coincidence_total + self.same_side_total()
    }
}

/// Simulates the scenario and reduces it to detector probabilities.
pub fn coincidence_probabilities(config: &ScenarioConfig) -> DetectionStats {
    DetectionStats::from_output(&simulate_scenario(config))
}

fn tilted_plus(eps: f64) -> JonesVector {
    // Angle pi/4 + eps, expanded so eps = 0 hits 1/sqrt(2) exactly.
    let f = std::f64::consts::FRAC_1_SQRT_2;
    let (s, c) = eps.sin_cos();
    JonesVector::new(
        Complex64::new(f * (c - s), 0.0),
        Complex64::new(f * (c + s), 0.0),
    )
    .expect("tilted preparation is normalized")
}

fn tilted_minus(eps: f64) -> JonesVector {
    // Angle -pi/4 + eps: the V amplitude gains what the H one loses.
    let f = std::f64::consts::FRAC_1_SQRT_2;
    let (s, c) = eps.sin_cos();
    JonesVector::new(
        Complex64::new(f * (c + s), 0.0),
        Complex64::new(f * (s - c), 0.0),
    )
    .expect("tilted preparation is normalized")
}

/// Builds the standard arrangement: Case 1 prepares both arms diagonal
/// (angles pi/4 + eps, pi/4 + eps'), Case 2 tilts arm b around the
/// antidiagonal instead (-pi/4 + eps'), flipping the sign of its H
/// amplitude at eps' = 0.
pub fn case_config(
    case: BellCase,
    bs: BeamSplitterParams,
    eps: f64,
    eps_prime: f64,
    gamma: f64,
) -> Result<ScenarioConfig> {
    let ja = tilted_plus(eps);
    let jb = match case {
        BellCase::One => tilted_plus(eps_prime),
        BellCase::Two => tilted_minus(eps_prime),
    };
    ScenarioConfig::from_fields(ja, jb, bs, gamma, eps, eps_prime, Preparation::Case(case))
}

/// What a coincidence event means under a given arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventClass {
    /// The event heralds this Bell state.
    Bell(BellKind),
    /// Same-side event: carries no Bell signal, dropped by post-selection.
    Ignore,
}

fn parse_detector(token: &[u8]) -> Option<(crate::modes::Path, Polarization)> {
    let path = match token[0] {
        b'A' => crate::modes::Path::A,
        b'B' => crate::modes::Path::B,
        _ => return None,
    };
    let pol = match token[1] {
        b'h' => Polarization::H,
        b'v' => Polarization::V,
        _ => return None,
    };
    Some((path, pol))
}

/// Classifies a detector-pair label such as `"AhBv"` or `"AvAh"`.
/// Token order does not matter. Cross-side events with equal
/// polarizations herald the Phi state of the arrangement, opposite
/// polarizations the Psi state; same-side events are ignored.
pub fn classify_coincidence(case: BellCase, event: &str) -> Result<EventClass> {
    let bytes = event.as_bytes();
    if bytes.len() != 4 {
        return Err(Error::UnknownEvent(event.to_string()));
    }
    let (first, second) = match (parse_detector(&bytes[0..2]), parse_detector(&bytes[2..4])) {
        (Some(f), Some(s)) => (f, s),
        _ => return Err(Error::UnknownEvent(event.to_string())),
    };
    if first.0 == second.0 {
        return Ok(EventClass::Ignore);
    }
    let family = if first.1 == second.1 {
        BellFamily::Phi
    } else {
        BellFamily::Psi
    };
    Ok(EventClass::Bell(BellKind::target(case, family)))
}

/// Overlap-ratio fidelities of the perturbed arrangement against its two
/// target Bell states. Both follow cosine laws in the perturbation
/// angles; which combination goes with which family swaps between the
/// two cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub case: BellCase,
    pub eps: f64,
    pub eps_prime: f64,
    pub ratio_phi: f64,
    pub ratio_psi: f64,
    pub fidelity_phi: f64,
    pub fidelity_psi: f64,
}

/// Closed-form fidelity laws: Case 1 gives ratio_phi = cos(eps - eps')
/// and ratio_psi = cos(eps + eps'); Case 2 swaps the two combinations.
pub fn fidelity_ratio(case: BellCase, eps: f64, eps_prime: f64) -> FidelityReport {
    let (ratio_phi, ratio_psi) = match case {
        BellCase::One => ((eps - eps_prime).cos(), (eps + eps_prime).cos()),
        BellCase::Two => ((eps + eps_prime).cos(), (eps - eps_prime).cos()),
    };
    FidelityReport {
        case,
        eps,
        eps_prime,
        ratio_phi,
        ratio_psi,
        fidelity_phi: ratio_phi * ratio_phi,
        fidelity_psi: ratio_psi * ratio_psi,
    }
}

/// The same ratio obtained by brute force: simulate the unperturbed and
/// perturbed arrangements and divide the target-state overlaps. Fails if
/// the unperturbed overlap vanishes (e.g. the Phi family on a symmetric
/// splitter), since the ratio is then undefined.
pub fn fidelity_direct(
    case: BellCase,
    family: BellFamily,
    eps: f64,
    eps_prime: f64,
    bs: BeamSplitterParams,
) -> Result<f64> {
    let kind = BellKind::target(case, family);
    let target = target_state(kind);
    let reference = simulate_scenario(&case_config(case, bs, 0.0, 0.0, 1.0)?);
    let perturbed = simulate_scenario(&case_config(case, bs, eps, eps_prime, 1.0)?);
    let denom = target.overlap(reference.interfering_state());
    if denom.norm() <= EXACT_TOL {
        return Err(Error::Degenerate(format!(
            "the unperturbed arrangement produces no {kind} component, so the overlap ratio is undefined"
        )));
    }
    let ratio = target.overlap(perturbed.interfering_state()) / denom;
    Ok(ratio.re)
}

/// Fidelity of the renormalized coincidence (cross-side) component
/// against a Bell state: |<Bell|psi_ps>|^2. Unlike the overlap-ratio
/// form this conditions on post-selection succeeding.
pub fn post_selected_fidelity(s: &TwoPhotonState, kind: BellKind) -> Result<f64> {
    let ps = s.cross_side_component().normalized()?;
    Ok(target_state(kind).overlap(&ps).norm_sqr())
}
