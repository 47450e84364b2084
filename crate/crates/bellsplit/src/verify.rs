//! Self-check suites behind the `verify` subcommand: unitarity, norm
//! conservation, interference zeros, closed-form agreement, fidelity
//! laws, oracle equivalence, probability totals, and two deliberate
//! mutations that prove the checks can actually fail.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::bell::{
    bell_coefficients_closed_form, bell_decompose, case_config, fidelity_direct, fidelity_ratio,
    BellFamily, BellKind, DetectionStats,
};
use crate::bs::{BeamSplitterParams, TransmissionSign};
use crate::circuit::{
    distinguishable_propagate, matmul4, propagate, simulate_scenario, BellCase, ModeMatrix,
    ScenarioConfig,
};
use crate::jones::{JonesVector, PolarizationRotation};
use crate::modes::ModePair;
use crate::oracle::{
    oracle_equivalence_suite, oracle_propagate, random_beam_splitter, random_jones,
    random_rotation,
};
use crate::state::product_input_state;
use crate::{CROSS_CHECK_TOL, EXACT_TOL};

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub draws: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 7,
            draws: 1000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        SuiteOutcome {
            name,
            passed,
            detail,
        }
    }
}

impl std::fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} ({})",
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.detail
        )
    }
}

/// Runs every suite regardless of failures, in a fixed order.
pub fn run_verify(options: &VerifyOptions) -> Vec<SuiteOutcome> {
    vec![
        unitarity_suite(options),
        norm_conservation_suite(options),
        hom_suppression_suite(),
        case_zero_suite(),
        closed_form_suite(options),
        fidelity_grid_suite(),
        oracle_equivalence_outcome(options),
        stats_total_suite(options),
        mutation_sensitivity_suite(),
    ]
}

pub fn all_passed(outcomes: &[SuiteOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

fn unitarity_suite(options: &VerifyOptions) -> SuiteOutcome {
    let mut rng = ChaCha12Rng::seed_from_u64(options.seed.wrapping_add(1));
    let mut max = 0.0f64;
    for _ in 0..options.draws {
        let bs = random_beam_splitter(&mut rng);
        let report = bs.verify_unitarity();
        max = max
            .max(report.max_unitarity_deviation)
            .max(report.max_determinant_deviation)
            .max(report.phase_sum_residual);
        // The four-mode matrix must be unitary as well.
        let u = bs.single_photon_matrix();
        let mut adjoint: ModeMatrix = u;
        for (i, row) in u.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                adjoint[j][i] = entry.conj();
            }
        }
        let product = matmul4(&adjoint, &u);
        for (i, row) in product.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                max = max.max((entry - expected).norm());
            }
        }
    }
    SuiteOutcome::new(
        "unitarity",
        max <= EXACT_TOL,
        format!("{} draws, max deviation {:.3e}", options.draws, max),
    )
}

fn norm_conservation_suite(options: &VerifyOptions) -> SuiteOutcome {
    let mut rng = ChaCha12Rng::seed_from_u64(options.seed.wrapping_add(2));
    let mut max = 0.0f64;
    for _ in 0..options.draws {
        let ja = random_jones(&mut rng);
        let jb = random_jones(&mut rng);
        let rot_a = random_rotation(&mut rng);
        let rot_b = random_rotation(&mut rng);
        let bs = random_beam_splitter(&mut rng);
        max = max.max((propagate(&ja, &jb, &rot_a, &rot_b, &bs).norm() - 1.0).abs());
        max = max.max((oracle_propagate(&ja, &jb, &bs, &rot_a, &rot_b).norm() - 1.0).abs());
        max = max.max((distinguishable_propagate(&ja, &jb, &bs).norm() - 1.0).abs());
    }
    SuiteOutcome::new(
        "norm conservation",
        max <= EXACT_TOL,
        format!("{} draws, max |norm - 1| = {:.3e}", options.draws, max),
    )
}

fn hom_suppression_suite() -> SuiteOutcome {
    let v = JonesVector::vertical();
    let bs = BeamSplitterParams::symmetric_50_50();
    let id = PolarizationRotation::identity();
    let out = propagate(&v, &v, &id, &id, &bs);
    let mut max = 0.0f64;
    for pair in ModePair::ALL {
        if pair.is_cross_side() {
            max = max.max(out.amplitude(pair).norm());
        }
    }
    // Equal photons on the symmetric splitter never exit on opposite
    // sides; partial overlap leaves the classical residue (1-g^2)/2.
    for gamma in [0.0, 0.5, 1.0] {
        let config = ScenarioConfig::custom(v, v, bs, gamma).expect("valid gamma");
        let stats = DetectionStats::from_output(&simulate_scenario(&config));
        let expected = (1.0 - gamma * gamma) / 2.0;
        max = max.max((stats.p_coincidence_total - expected).abs());
    }
    SuiteOutcome::new(
        "two-photon interference",
        max <= EXACT_TOL,
        format!("max cross-side residual {:.3e}", max),
    )
}

fn case_zero_suite() -> SuiteOutcome {
    let mut max = 0.0f64;
    for r_sq in [0.6, 0.73, 0.9] {
        let bs = BeamSplitterParams::from_r_squared(r_sq, TransmissionSign::PlusI)
            .expect("valid reflectance");
        for case in [BellCase::One, BellCase::Two] {
            let config = case_config(case, bs, 0.0, 0.0, 1.0).expect("valid case");
            let coeff = bell_decompose(simulate_scenario(&config).interfering_state());
            for kind in BellKind::ALL {
                if kind != BellKind::target(case, kind.family()) {
                    max = max.max(coeff.coefficient(kind).norm());
                }
            }
        }
    }
    SuiteOutcome::new(
        "case selection zeros",
        max <= EXACT_TOL,
        format!("max non-target coefficient {:.3e}", max),
    )
}

fn closed_form_suite(options: &VerifyOptions) -> SuiteOutcome {
    let mut rng = ChaCha12Rng::seed_from_u64(options.seed.wrapping_add(3));
    let mut max = 0.0f64;
    for _ in 0..options.draws {
        let ja = random_jones(&mut rng);
        let jb = random_jones(&mut rng);
        let bs = random_beam_splitter(&mut rng);
        let id = PolarizationRotation::identity();
        let direct = bell_decompose(&propagate(&ja, &jb, &id, &id, &bs));
        let closed = bell_coefficients_closed_form(&ja, &jb, &bs);
        for kind in BellKind::ALL {
            max = max.max((direct.coefficient(kind) - closed.coefficient(kind)).norm());
        }
        for (d, c) in direct.bunched.iter().zip(closed.bunched.iter()) {
            max = max.max((d - c).norm());
        }
    }
    SuiteOutcome::new(
        "closed-form coefficients",
        max <= EXACT_TOL,
        format!("{} draws, max deviation {:.3e}", options.draws, max),
    )
}

fn fidelity_grid_suite() -> SuiteOutcome {
    let bs = BeamSplitterParams::from_r_squared(0.6, TransmissionSign::PlusI)
        .expect("valid reflectance");
    let grid: Vec<f64> = (0..13).map(|i| -0.3 + 0.05 * i as f64).collect();
    let mut max = 0.0f64;
    for case in [BellCase::One, BellCase::Two] {
        for &eps in &grid {
            for &eps_prime in &grid {
                let law = fidelity_ratio(case, eps, eps_prime);
                for family in [BellFamily::Phi, BellFamily::Psi] {
                    let direct = fidelity_direct(case, family, eps, eps_prime, bs)
                        .expect("reference overlap is nonzero at r^2 = 0.6");
                    let expected = match family {
                        BellFamily::Phi => law.ratio_phi,
                        BellFamily::Psi => law.ratio_psi,
                    };
                    max = max.max((direct - expected).abs());
                }
            }
        }
    }
    SuiteOutcome::new(
        "fidelity laws",
        max <= CROSS_CHECK_TOL,
        format!("13x13 grid, both cases and families, max deviation {:.3e}", max),
    )
}

fn oracle_equivalence_outcome(options: &VerifyOptions) -> SuiteOutcome {
    match oracle_equivalence_suite(options.draws, options.seed) {
        Ok(report) => SuiteOutcome::new(
            "oracle equivalence",
            report.passed(),
            format!(
                "{} draws, seed {}, max deviation {:.3e}",
                report.draws, report.seed, report.max_deviation
            ),
        ),
        Err(e) => SuiteOutcome::new("oracle equivalence", false, e.to_string()),
    }
}

fn stats_total_suite(options: &VerifyOptions) -> SuiteOutcome {
    let mut rng = ChaCha12Rng::seed_from_u64(options.seed.wrapping_add(4));
    let mut max = 0.0f64;
    for gamma in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for case in [BellCase::One, BellCase::Two] {
            let config = case_config(
                case,
                BeamSplitterParams::from_r_squared(0.6, TransmissionSign::PlusI)
                    .expect("valid reflectance"),
                0.0,
                0.0,
                gamma,
            )
            .expect("valid case");
            let stats = DetectionStats::from_output(&simulate_scenario(&config));
            max = max.max((stats.sum() - 1.0).abs());
        }
        for _ in 0..options.draws / 10 {
            let ja = random_jones(&mut rng);
            let jb = random_jones(&mut rng);
            let bs = random_beam_splitter(&mut rng);
            let config = ScenarioConfig::custom(ja, jb, bs, gamma).expect("valid gamma");
            let stats = DetectionStats::from_output(&simulate_scenario(&config));
            max = max.max((stats.sum() - 1.0).abs());
        }
    }
    SuiteOutcome::new(
        "probability totals",
        max <= EXACT_TOL,
        format!("max |sum - 1| = {:.3e}", max),
    )
}

/// Pair lift with the bosonic weight deliberately removed: doubly
/// occupied kets are divided by (1+d) instead of sqrt(1+d). Feeding it
/// the HOM arrangement must break norm conservation, or the norm suite
/// has no teeth.
fn lift_without_bosonic_weight(u: &ModeMatrix) -> [[Complex64; 10]; 10] {
    let mut m = [[Complex64::ZERO; 10]; 10];
    for out_pair in ModePair::ALL {
        let (p, q) = (out_pair.first().index(), out_pair.second().index());
        let w_out = if p == q { 2.0 } else { 1.0 };
        for in_pair in ModePair::ALL {
            let (n1, n2) = (in_pair.first().index(), in_pair.second().index());
            let w_in = if n1 == n2 { 2.0 } else { 1.0 };
            let perm = u[p][n1] * u[q][n2] + u[p][n2] * u[q][n1];
            m[out_pair.index()][in_pair.index()] = perm / (w_out * w_in);
        }
    }
    m
}

fn mutation_sensitivity_suite() -> SuiteOutcome {
    let v = JonesVector::vertical();
    let id = PolarizationRotation::identity();

    // Mutation 1: drop the sqrt(2) bunching weight. The both-V norm
    // collapses to sqrt(r^4 + t^4): sqrt(0.52) at r^2 = 0.6 and
    // sqrt(0.5) on the symmetric splitter.
    let mut norm_gap = f64::INFINITY;
    let mut law_residual = 0.0f64;
    for r_sq in [0.6, 0.5] {
        let bs = BeamSplitterParams::from_r_squared(r_sq, TransmissionSign::PlusI)
            .expect("valid reflectance");
        let input = product_input_state(&v, &v);
        let m = lift_without_bosonic_weight(&bs.single_photon_matrix());
        let a = input.amplitudes();
        let mut out = [Complex64::ZERO; 10];
        for (slot, row) in out.iter_mut().zip(m.iter()) {
            *slot = row.iter().zip(a.iter()).map(|(x, y)| x * y).sum();
        }
        let broken_norm = crate::state::TwoPhotonState::from_amplitudes(out).norm();
        let t_sq = 1.0 - r_sq;
        law_residual = law_residual
            .max((broken_norm - (r_sq * r_sq + t_sq * t_sq).sqrt()).abs());
        norm_gap = norm_gap.min((broken_norm - 1.0).abs());
    }
    let mutation1_detected = norm_gap > 1e3 * EXACT_TOL && law_residual <= EXACT_TOL;

    // Mutation 2: flip the transmission sign in the oracle only. On the
    // symmetric both-V arrangement every bunched amplitude reverses, so
    // engine and oracle drift apart by exactly sqrt(2).
    let bs = BeamSplitterParams::symmetric_50_50();
    let engine = propagate(&v, &v, &id, &id, &bs);
    let flipped = bs.with_sign(bs.sign().flipped());
    let oracle = oracle_propagate(&v, &v, &flipped, &id, &id);
    let mut deviation = 0.0f64;
    for pair in ModePair::ALL {
        deviation = deviation.max((engine.amplitude(pair) - oracle.amplitude(pair)).norm());
    }
    let mutation2_detected = (deviation - std::f64::consts::SQRT_2).abs() <= EXACT_TOL
        && deviation > CROSS_CHECK_TOL;

    SuiteOutcome::new(
        "mutation sensitivity",
        mutation1_detected && mutation2_detected,
        format!(
            "dropped bunching weight shifts both-V norm by {:.3}, flipped sign drifts the \
             oracle by {:.3}",
            norm_gap, deviation
        ),
    )
}
