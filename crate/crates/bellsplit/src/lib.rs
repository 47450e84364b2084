//! Two-photon interference on a polarization-dependent beam splitter.
//!
//! One photon enters each input arm of a lossless beam splitter whose
//! reflectivity may differ between vertical and horizontal polarization.
//! The crate propagates the bosonic two-photon state through the
//! splitter, decomposes the coincidence part into Bell states, predicts
//! detector statistics for partially distinguishable photons, and
//! quantifies how preparation errors degrade the heralded Bell states.
//!
//! ```
//! use bellsplit::{
//!     case_config, coincidence_probabilities, BeamSplitterParams, BellCase, TransmissionSign,
//! };
//!
//! // Both arms diagonal on a splitter with r^2 = 0.6 for both polarizations.
//! let bs = BeamSplitterParams::from_r_squared(0.6, TransmissionSign::PlusI)?;
//! let config = case_config(BellCase::One, bs, 0.0, 0.0, 1.0)?;
//!
//! // Each heralding coincidence fires at (r^2 - t^2)^2 / 4 = 0.01.
//! let stats = coincidence_probabilities(&config);
//! assert!((stats.p_av_bh - 0.01).abs() < 1e-12);
//! assert!((stats.p_coincidence_total - 0.04).abs() < 1e-12);
//! # Ok::<(), bellsplit::Error>(())
//! ```

pub mod bell;
pub mod bs;
pub mod circuit;
pub mod config;
pub mod error;
pub mod jones;
pub mod modes;
mod numfmt;
pub mod oracle;
pub mod report;
pub mod state;
pub mod sweep;
pub mod verify;

/// Tolerance for identities that hold to rounding error.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for agreement between independent computation routes.
pub const CROSS_CHECK_TOL: f64 = 1e-10;

pub use bell::{
    bell_coefficients_closed_form, bell_decompose, case_config, classify_coincidence,
    coincidence_probabilities, fidelity_direct, fidelity_ratio, post_selected_fidelity,
    target_state, BellCoefficients, BellFamily, BellKind, DetectionStats, EventClass,
    FidelityReport,
};
pub use bs::{BeamSplitterParams, TransmissionSign, UnitarityReport};
pub use circuit::{
    apply_beam_splitter, apply_polarization_rotation, distinguishable_propagate, propagate,
    simulate_scenario, BellCase, Preparation, ScenarioConfig, ScenarioOutput, ScenarioWarning,
    StateMixture,
};
pub use error::{Error, Result};
pub use jones::{JonesVector, PolarizationRotation};
pub use modes::{ModeAmplitudes, ModeIndex, ModePair, Path, Polarization};
pub use oracle::{oracle_equivalence_suite, oracle_propagate, CreationPolynomial, OracleReport};
pub use report::{evaluate_scenario, ScenarioReport, CSV_HEADER, SWEEP_CSV_HEADER};
pub use state::{product_input_state, DistinguishableTwoPhotonState, TwoPhotonState};
pub use sweep::{
    apply_parameter, optimize, run_sweep, Objective, OptimizeOutcome, SweepParameter, SweepSpec,
};
pub use verify::{all_passed, run_verify, SuiteOutcome, VerifyOptions};
