//! Acceptance gate: eight numbered criteria, one test (and one printed
//! verdict line) per criterion. Tolerances come from the library's two
//! tiers: 1e-12 where results are algebraically exact, 1e-10 where two
//! independent computations are cross-checked.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::FRAC_1_SQRT_2;

use bellsplit::bell::{
    bell_coefficients_closed_form, bell_decompose, case_config, fidelity_direct, fidelity_ratio,
    BellFamily, BellKind, DetectionStats,
};
use bellsplit::circuit::{propagate, simulate_scenario, BellCase, ScenarioConfig, ScenarioOutput};
use bellsplit::oracle::{oracle_equivalence_suite, oracle_propagate};
use bellsplit::verify::{run_verify, VerifyOptions};
use bellsplit::{
    BeamSplitterParams, JonesVector, ModePair, PolarizationRotation, TransmissionSign,
    CROSS_CHECK_TOL, EXACT_TOL,
};

const SEED: u64 = 7;

fn draw_jones(rng: &mut impl Rng) -> JonesVector {
    let u: f64 = rng.gen();
    let p1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let p2 = rng.gen_range(0.0..std::f64::consts::TAU);
    JonesVector::new(
        Complex64::from_polar(u.sqrt(), p1),
        Complex64::from_polar((1.0 - u).sqrt(), p2),
    )
    .unwrap()
}

fn draw_splitter(rng: &mut impl Rng) -> BeamSplitterParams {
    let r_v_sq: f64 = rng.gen_range(0.05..0.95);
    let r_h_sq: f64 = rng.gen_range(0.05..0.95);
    let sign = if rng.gen_bool(0.5) {
        TransmissionSign::PlusI
    } else {
        TransmissionSign::MinusI
    };
    BeamSplitterParams::new(r_v_sq.sqrt(), r_h_sq.sqrt(), sign).unwrap()
}

fn splitter(r_sq: f64) -> BeamSplitterParams {
    BeamSplitterParams::from_r_squared(r_sq, TransmissionSign::PlusI).unwrap()
}

fn pure_case_state(case: BellCase, r_sq: f64) -> bellsplit::TwoPhotonState {
    let config = case_config(case, splitter(r_sq), 0.0, 0.0, 1.0).unwrap();
    match simulate_scenario(&config) {
        ScenarioOutput::Pure(s) => s,
        ScenarioOutput::Mixture(_) => unreachable!("gamma is 1"),
    }
}

#[test]
fn criterion_1_hom_bunching_recovery() {
    let bs = BeamSplitterParams::symmetric_50_50();
    let id = PolarizationRotation::identity();
    let mut rng = ChaCha12Rng::seed_from_u64(SEED);
    let mut inputs = vec![
        JonesVector::vertical(),
        JonesVector::horizontal(),
        JonesVector::diagonal(),
    ];
    for _ in 0..50 {
        inputs.push(draw_jones(&mut rng));
    }
    let mut max = 0.0f64;
    for j in &inputs {
        let out = propagate(j, j, &id, &id, &bs);
        for pair in ModePair::ALL {
            if pair.is_cross_side() {
                max = max.max(out.amplitude(pair).norm());
            }
        }
    }
    assert!(max <= EXACT_TOL, "cross-side residual {max}");
    println!("criterion 1 (identical photons never split on the symmetric splitter): pass");
}

#[test]
fn criterion_2_case_selection_zeros() {
    for r_sq in [0.55, 0.6, 0.75, 0.9] {
        for case in [BellCase::One, BellCase::Two] {
            let coeff = bell_decompose(&pure_case_state(case, r_sq));
            for kind in BellKind::ALL {
                let magnitude = coeff.coefficient(kind).norm();
                if kind == BellKind::target(case, kind.family()) {
                    assert!(
                        magnitude > 1e-3,
                        "target {kind} vanished for case {case:?} at r_sq {r_sq}"
                    );
                } else {
                    assert!(
                        magnitude <= EXACT_TOL,
                        "non-target {kind} = {magnitude} for case {case:?} at r_sq {r_sq}"
                    );
                }
            }
        }
    }
    println!("criterion 2 (each case keeps only its two target Bell states): pass");
}

#[test]
fn criterion_3_closed_form_matches_projection() {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED);
    let id = PolarizationRotation::identity();
    let mut max = 0.0f64;
    for _ in 0..1000 {
        let ja = draw_jones(&mut rng);
        let jb = draw_jones(&mut rng);
        let bs = draw_splitter(&mut rng);
        let projected = bell_decompose(&propagate(&ja, &jb, &id, &id, &bs));
        let closed = bell_coefficients_closed_form(&ja, &jb, &bs);
        for kind in BellKind::ALL {
            max = max.max((projected.coefficient(kind) - closed.coefficient(kind)).norm());
        }
        for (p, c) in projected.bunched.iter().zip(closed.bunched.iter()) {
            max = max.max((p - c).norm());
        }
    }
    assert!(max <= EXACT_TOL, "max deviation {max}");
    println!("criterion 3 (closed-form coefficients match the basis projection): pass");
}

#[test]
fn criterion_4_oracle_equivalence() {
    let report = oracle_equivalence_suite(1000, SEED).unwrap();
    assert!(
        report.max_deviation <= CROSS_CHECK_TOL,
        "max deviation {}",
        report.max_deviation
    );
    println!("criterion 4 (engine matches the operator-expansion oracle): pass");
}

#[test]
fn criterion_5_fidelity_laws_on_the_grid() {
    let bs = splitter(0.6);
    let grid: Vec<f64> = (0..13).map(|i| -0.3 + 0.05 * i as f64).collect();
    let mut max = 0.0f64;
    for case in [BellCase::One, BellCase::Two] {
        for &eps in &grid {
            for &eps_prime in &grid {
                let law = fidelity_ratio(case, eps, eps_prime);
                for family in [BellFamily::Phi, BellFamily::Psi] {
                    let ratio = fidelity_direct(case, family, eps, eps_prime, bs).unwrap();
                    let expected = match family {
                        BellFamily::Phi => law.fidelity_phi,
                        BellFamily::Psi => law.fidelity_psi,
                    };
                    max = max.max((ratio * ratio - expected).abs());
                }
            }
        }
    }
    assert!(max <= CROSS_CHECK_TOL, "max deviation {max}");
    println!("criterion 5 (perturbation fidelities follow the squared-cosine laws): pass");
}

#[test]
fn criterion_6_conservation() {
    let mut rng = ChaCha12Rng::seed_from_u64(SEED);
    let mut max_norm = 0.0f64;
    let mut max_sum = 0.0f64;
    for _ in 0..500 {
        let ja = draw_jones(&mut rng);
        let jb = draw_jones(&mut rng);
        let bs = draw_splitter(&mut rng);
        for gamma in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let config = ScenarioConfig::custom(ja, jb, bs, gamma).unwrap();
            let output = simulate_scenario(&config);
            max_norm = max_norm.max((output.interfering_state().norm() - 1.0).abs());
            let stats = DetectionStats::from_output(&output);
            max_sum = max_sum.max((stats.sum() - 1.0).abs());
        }
    }
    assert!(max_norm <= EXACT_TOL, "norm deviation {max_norm}");
    assert!(max_sum <= EXACT_TOL, "stats sum deviation {max_sum}");
    println!("criterion 6 (norms and detection probabilities are conserved): pass");
}

#[test]
fn criterion_7_representative_numbers() {
    let expected_c = 0.2 * FRAC_1_SQRT_2;
    let bs = splitter(0.6);
    let config = case_config(BellCase::One, bs, 0.0, 0.0, 1.0).unwrap();

    // Engine and basis projection.
    let state = pure_case_state(BellCase::One, 0.6);
    let projected = bell_decompose(&state);
    // Closed form on the same preparation.
    let closed = bell_coefficients_closed_form(config.ja(), config.jb(), &bs);
    // Operator-expansion oracle.
    let id = PolarizationRotation::identity();
    let oracle = bell_decompose(&oracle_propagate(config.ja(), config.jb(), &bs, &id, &id));

    for coeff in [&projected, &closed, &oracle] {
        assert!((coeff.c_phi_plus.norm() - expected_c).abs() <= EXACT_TOL);
        assert!((coeff.c_psi_plus.norm() - expected_c).abs() <= EXACT_TOL);
    }
    let stats = DetectionStats::from_pure_state(&state);
    for p in [stats.p_ah_bh, stats.p_ah_bv, stats.p_av_bh, stats.p_av_bv] {
        assert!((p - 0.01).abs() <= EXACT_TOL, "cross-side probability {p}");
    }
    assert!((expected_c - 0.141421).abs() < 1e-6);
    println!("criterion 7 (case 1 at r^2 = 0.6 reproduces the reference numbers): pass");
}

#[test]
fn criterion_8_mutation_sensitivity() {
    let outcomes = run_verify(&VerifyOptions {
        seed: SEED,
        draws: 200,
    });
    let mutation = outcomes
        .iter()
        .find(|o| o.name == "mutation sensitivity")
        .expect("suite present");
    assert!(mutation.passed, "{mutation}");
    // The deliberately broken variants must be *detected*: the detail
    // line records how far each one drifts from the conserved values.
    assert!(mutation.detail.contains("0.279"), "{}", mutation.detail);
    assert!(mutation.detail.contains("1.414"), "{}", mutation.detail);
    for outcome in &outcomes {
        assert!(outcome.passed, "suite failed: {outcome}");
    }
    println!("criterion 8 (the self checks detect broken bunching weights and sign flips): pass");
}
