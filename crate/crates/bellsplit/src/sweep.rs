//! Parameter sweeps and exhaustive grid-search optimization.
//!
//! A sweep varies one scenario parameter over a linear grid; the
//! optimizer takes one axis per parameter and walks their cartesian
//! product in a fixed order, so results are fully deterministic.

use crate::bell::{case_config, BellFamily, BellKind};
use crate::bs::BeamSplitterParams;
use crate::circuit::{Preparation, ScenarioConfig};
use crate::error::{Error, Result};
use crate::numfmt::g12;
use crate::report::{evaluate_scenario, ScenarioReport};
use std::fmt;
use std::str::FromStr;

/// The scenario parameters a sweep can vary. The declaration order is
/// the canonical axis order for the optimizer: r_sq varies slowest, so
/// the smallest-r_sq tie-break falls out of first-wins updating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SweepParameter {
    RSq,
    Eps,
    EpsPrime,
    Gamma,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::RSq => "r_sq",
            SweepParameter::Eps => "eps",
            SweepParameter::EpsPrime => "eps_prime",
            SweepParameter::Gamma => "gamma",
        }
    }

    /// Closed interval of admissible values.
    pub fn domain(self) -> (f64, f64) {
        match self {
            SweepParameter::RSq => (0.0, 1.0),
            SweepParameter::Eps | SweepParameter::EpsPrime => {
                (-std::f64::consts::PI, std::f64::consts::PI)
            }
            SweepParameter::Gamma => (0.0, 1.0),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r_sq" => Ok(SweepParameter::RSq),
            "eps" => Ok(SweepParameter::Eps),
            "eps_prime" => Ok(SweepParameter::EpsPrime),
            "gamma" => Ok(SweepParameter::Gamma),
            other => Err(Error::UnknownSweepParameter(other.to_string())),
        }
    }
}

/// One linear grid: `steps` equally spaced values from `start` to
/// `stop` inclusive, both endpoints exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn new(parameter: SweepParameter, start: f64, stop: f64, steps: usize) -> Result<Self> {
        let invalid = |message: String| Error::InvalidSweep {
            spec: format!("{}:{}:{}:{}", parameter, start, stop, steps),
            message,
        };
        if steps < 2 {
            return Err(invalid("steps must be at least 2".to_string()));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(invalid("start and stop must be finite".to_string()));
        }
        if start >= stop {
            return Err(invalid("start must be strictly below stop".to_string()));
        }
        let (lo, hi) = parameter.domain();
        if start < lo || stop > hi {
            return Err(invalid(format!(
                "{} values must lie within [{}, {}]",
                parameter, lo, hi
            )));
        }
        Ok(SweepSpec {
            parameter,
            start,
            stop,
            steps,
        })
    }

    /// The grid points, ascending. The last point is exactly `stop`;
    /// interior points are start + span * i / (steps - 1).
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let denom = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + span * i as f64 / denom
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// Parses "name:start:stop:steps", e.g. "eps:-0.3:0.3:13".
    fn from_str(s: &str) -> Result<Self> {
        let invalid = |message: String| Error::InvalidSweep {
            spec: s.to_string(),
            message,
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(invalid(
                "expected four colon-separated fields name:start:stop:steps".to_string(),
            ));
        }
        let parameter = SweepParameter::from_str(parts[0])?;
        let number = |field: &str, label: &str| -> Result<f64> {
            field
                .parse()
                .map_err(|_| invalid(format!("{label} '{field}' is not a number")))
        };
        let start = number(parts[1], "start")?;
        let stop = number(parts[2], "stop")?;
        let steps: usize = parts[3]
            .parse()
            .map_err(|_| invalid(format!("steps '{}' is not a count", parts[3])))?;
        SweepSpec::new(parameter, start, stop, steps)
    }
}

/// Rebuilds the scenario with one parameter replaced. Case preparations
/// are reconstructed from their defining angles so the prepared states
/// stay consistent with the new parameter; custom preparations keep
/// their explicit Jones vectors.
pub fn apply_parameter(
    config: &ScenarioConfig,
    parameter: SweepParameter,
    value: f64,
) -> Result<ScenarioConfig> {
    match parameter {
        SweepParameter::RSq => {
            let bs = BeamSplitterParams::from_r_squared(value, config.beam_splitter().sign())?;
            match config.preparation() {
                Preparation::Case(case) => {
                    case_config(case, bs, config.eps(), config.eps_prime(), config.gamma())
                }
                Preparation::Custom => {
                    Ok(
                        ScenarioConfig::custom(*config.ja(), *config.jb(), bs, config.gamma())?
                            .with_rotations(config.rot_a().clone(), config.rot_b().clone()),
                    )
                }
            }
        }
        SweepParameter::Eps => rebuild_case(config, value, config.eps_prime()),
        SweepParameter::EpsPrime => rebuild_case(config, config.eps(), value),
        SweepParameter::Gamma => config.clone().with_gamma(value),
    }
}

fn rebuild_case(config: &ScenarioConfig, eps: f64, eps_prime: f64) -> Result<ScenarioConfig> {
    match config.preparation() {
        Preparation::Case(case) => case_config(
            case,
            *config.beam_splitter(),
            eps,
            eps_prime,
            config.gamma(),
        ),
        Preparation::Custom => Err(Error::Unsupported(
            "perturbation angles redefine a case preparation; explicit Jones vectors have no \
             eps to vary"
                .to_string(),
        )),
    }
}

/// Evaluates the sweep in grid order, one report per point.
pub fn run_sweep(config: &ScenarioConfig, spec: &SweepSpec) -> Result<Vec<ScenarioReport>> {
    spec.values()
        .into_iter()
        .map(|v| apply_parameter(config, spec.parameter, v).map(|c| evaluate_scenario(&c)))
        .collect()
}

/// What the grid search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Total cross-side coincidence probability.
    MaxCrossSideRate,
    /// The smaller of the two target Bell coefficient magnitudes; case
    /// preparations only.
    MaxMinBellCoefficient,
    /// Negated magnitude gap between the two target coefficients, so
    /// perfectly balanced arrangements score highest; case preparations
    /// only.
    TargetBalance,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::MaxCrossSideRate => "max_cross_side_rate",
            Objective::MaxMinBellCoefficient => "max_min_bell_coefficient",
            Objective::TargetBalance => "target_balance",
        }
    }

    pub fn evaluate(self, report: &ScenarioReport) -> Result<f64> {
        match self {
            Objective::MaxCrossSideRate => Ok(report.stats.p_coincidence_total),
            Objective::MaxMinBellCoefficient | Objective::TargetBalance => {
                let Preparation::Case(case) = report.config.preparation() else {
                    return Err(Error::Unsupported(format!(
                        "objective {} scores the case's two target Bell coefficients, so it \
                         needs a case preparation",
                        self.name()
                    )));
                };
                let magnitude = |family| {
                    report
                        .coefficients
                        .coefficient(BellKind::target(case, family))
                        .norm()
                };
                let phi = magnitude(BellFamily::Phi);
                let psi = magnitude(BellFamily::Psi);
                Ok(match self {
                    Objective::MaxMinBellCoefficient => phi.min(psi),
                    Objective::TargetBalance => -(phi - psi).abs(),
                    Objective::MaxCrossSideRate => unreachable!(),
                })
            }
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_cross_side_rate" => Ok(Objective::MaxCrossSideRate),
            "max_min_bell_coefficient" => Ok(Objective::MaxMinBellCoefficient),
            "target_balance" => Ok(Objective::TargetBalance),
            other => Err(Error::UnknownObjective(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub objective: Objective,
    /// Best grid point, one entry per axis in canonical axis order.
    pub best: Vec<(SweepParameter, f64)>,
    pub best_value: f64,
    pub best_report: ScenarioReport,
    pub evaluated: usize,
    /// Grid points discarded because r_sq reached 1: a mirror never
    /// brings the photons together, so its trivially perfect
    /// coincidence rate is not a usable arrangement.
    pub skipped_at_mirror: usize,
}

impl fmt::Display for OptimizeOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (parameter, value) in &self.best {
            writeln!(f, "best {} = {}", parameter, g12(*value))?;
        }
        writeln!(f, "objective {} = {}", self.objective, g12(self.best_value))?;
        write!(
            f,
            "evaluated {} grid points ({} skipped at the mirror bound)",
            self.evaluated, self.skipped_at_mirror
        )
    }
}

/// Exhaustive search over the cartesian product of the axes. Axes are
/// ordered canonically (r_sq, eps, eps_prime, gamma), each grid runs
/// ascending, and only strictly better scores replace the incumbent,
/// so ties resolve to the earliest point: smallest r_sq first. With no
/// axes the base configuration is the entire grid.
pub fn optimize(
    config: &ScenarioConfig,
    axes: &[SweepSpec],
    objective: Objective,
) -> Result<OptimizeOutcome> {
    let mut sorted: Vec<&SweepSpec> = axes.iter().collect();
    sorted.sort_by_key(|spec| spec.parameter);
    for pair in sorted.windows(2) {
        if pair[0].parameter == pair[1].parameter {
            return Err(Error::InvalidSweep {
                spec: pair[1].parameter.name().to_string(),
                message: "duplicate optimization axis".to_string(),
            });
        }
    }
    let grids: Vec<(SweepParameter, Vec<f64>)> = sorted
        .iter()
        .map(|spec| (spec.parameter, spec.values()))
        .collect();

    let mut best: Option<(Vec<f64>, f64, ScenarioReport)> = None;
    let mut evaluated = 0;
    let mut skipped_at_mirror = 0;
    let mut index = vec![0usize; grids.len()];
    'grid: loop {
        let point: Vec<f64> = index
            .iter()
            .zip(&grids)
            .map(|(&i, (_, values))| values[i])
            .collect();
        let at_mirror = grids
            .iter()
            .zip(&point)
            .any(|((parameter, _), &value)| *parameter == SweepParameter::RSq && value >= 1.0);
        if at_mirror {
            skipped_at_mirror += 1;
        } else {
            let mut current = config.clone();
            for ((parameter, _), &value) in grids.iter().zip(&point) {
                current = apply_parameter(&current, *parameter, value)?;
            }
            let report = evaluate_scenario(&current);
            let score = objective.evaluate(&report)?;
            evaluated += 1;
            if best.as_ref().is_none_or(|(_, incumbent, _)| score > *incumbent) {
                best = Some((point, score, report));
            }
        }

        // Odometer advance, last axis fastest.
        let mut k = grids.len();
        loop {
            if k == 0 {
                break 'grid;
            }
            k -= 1;
            index[k] += 1;
            if index[k] < grids[k].1.len() {
                break;
            }
            index[k] = 0;
        }
    }

    let (point, best_value, best_report) = best.ok_or_else(|| Error::InvalidSweep {
        spec: "r_sq".to_string(),
        message: "every grid point sits at or above the mirror bound".to_string(),
    })?;
    Ok(OptimizeOutcome {
        objective,
        best: grids
            .iter()
            .map(|(parameter, _)| *parameter)
            .zip(point)
            .collect(),
        best_value,
        best_report,
        evaluated,
        skipped_at_mirror,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs::TransmissionSign;
    use crate::circuit::BellCase;
    use crate::jones::JonesVector;
    use crate::EXACT_TOL;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn case_one(r_sq: f64) -> ScenarioConfig {
        let bs = BeamSplitterParams::from_r_squared(r_sq, TransmissionSign::PlusI).unwrap();
        case_config(BellCase::One, bs, 0.0, 0.0, 1.0).unwrap()
    }

    fn both_v_symmetric() -> ScenarioConfig {
        let v = JonesVector::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        ScenarioConfig::custom(v, v, BeamSplitterParams::symmetric_50_50(), 1.0).unwrap()
    }

    #[test]
    fn parameter_names_round_trip() {
        for p in [
            SweepParameter::RSq,
            SweepParameter::Eps,
            SweepParameter::EpsPrime,
            SweepParameter::Gamma,
        ] {
            assert_eq!(p.name().parse::<SweepParameter>().unwrap(), p);
        }
        let err = "r2".parse::<SweepParameter>().unwrap_err();
        assert_eq!(
            err.to_string(),
            "unknown sweep parameter 'r2' (expected r_sq, gamma, eps or eps_prime)"
        );
    }

    #[test]
    fn spec_parsing_accepts_the_colon_form() {
        let spec: SweepSpec = "eps:-0.3:0.3:13".parse().unwrap();
        assert_eq!(spec.parameter, SweepParameter::Eps);
        assert_eq!(spec.start, -0.3);
        assert_eq!(spec.stop, 0.3);
        assert_eq!(spec.steps, 13);
    }

    #[test]
    fn spec_parsing_rejects_malformed_input() {
        let cases = [
            (
                "eps:-0.3:0.3",
                "invalid sweep 'eps:-0.3:0.3': expected four colon-separated fields \
                 name:start:stop:steps",
            ),
            (
                "gamma:0:x:5",
                "invalid sweep 'gamma:0:x:5': stop 'x' is not a number",
            ),
            (
                "gamma:0:1:two",
                "invalid sweep 'gamma:0:1:two': steps 'two' is not a count",
            ),
            (
                "r_sq:0:1:1",
                "invalid sweep 'r_sq:0:1:1': steps must be at least 2",
            ),
            (
                "eps:0.3:-0.3:13",
                "invalid sweep 'eps:0.3:-0.3:13': start must be strictly below stop",
            ),
            (
                "eps:nan:0.3:13",
                "invalid sweep 'eps:NaN:0.3:13': start and stop must be finite",
            ),
            (
                "r_sq:0:1.5:5",
                "invalid sweep 'r_sq:0:1.5:5': r_sq values must lie within [0, 1]",
            ),
        ];
        for (input, expected) in cases {
            let err = input.parse::<SweepSpec>().unwrap_err();
            assert_eq!(err.to_string(), expected, "for input {input:?}");
        }
    }

    #[test]
    fn grid_endpoints_are_exact_and_zero_is_hit() {
        let spec = SweepSpec::new(SweepParameter::Eps, -0.3, 0.3, 13).unwrap();
        let values = spec.values();
        assert_eq!(values.len(), 13);
        assert_eq!(values[0], -0.3);
        assert_eq!(values[12], 0.3);
        assert_eq!(values[6], 0.0);
    }

    #[test]
    fn eps_sweep_matches_the_cosine_law_pointwise() {
        let spec = SweepSpec::new(SweepParameter::Eps, -0.3, 0.3, 13).unwrap();
        let reports = run_sweep(&case_one(0.6), &spec).unwrap();
        assert_eq!(reports.len(), 13);
        for (report, eps) in reports.iter().zip(spec.values()) {
            let fid = report.fidelity.unwrap();
            assert!((fid.fidelity_phi - eps.cos().powi(2)).abs() < EXACT_TOL);
            let (direct_phi, _) = {
                let row = report.sweep_csv_row();
                let fields: Vec<&str> = row.split(',').collect();
                (
                    fields[17].parse::<f64>().unwrap(),
                    fields[18].parse::<f64>().unwrap(),
                )
            };
            assert!((direct_phi - fid.fidelity_phi).abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_sweep_traces_the_interference_dip() {
        let spec = SweepSpec::new(SweepParameter::Gamma, 0.0, 1.0, 5).unwrap();
        let reports = run_sweep(&both_v_symmetric(), &spec).unwrap();
        for (report, gamma) in reports.iter().zip(spec.values()) {
            let expected = (1.0 - gamma * gamma) / 2.0;
            assert!((report.stats.p_coincidence_total - expected).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn r_sq_sweep_scales_the_target_coefficient_linearly() {
        let spec = SweepSpec::new(SweepParameter::RSq, 0.5, 0.95, 10).unwrap();
        let reports = run_sweep(&case_one(0.6), &spec).unwrap();
        for (report, r_sq) in reports.iter().zip(spec.values()) {
            let expected = (2.0 * r_sq - 1.0) * FRAC_1_SQRT_2;
            assert!((report.coefficients.c_phi_plus.norm() - expected).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn perturbation_sweeps_need_a_case_preparation() {
        let spec = SweepSpec::new(SweepParameter::Eps, -0.1, 0.1, 3).unwrap();
        let err = run_sweep(&both_v_symmetric(), &spec).unwrap_err();
        assert!(err.to_string().contains("case preparation"));
    }

    #[test]
    fn r_sq_sweep_keeps_custom_preparations() {
        let spec = SweepSpec::new(SweepParameter::RSq, 0.5, 0.9, 3).unwrap();
        let reports = run_sweep(&both_v_symmetric(), &spec).unwrap();
        for report in &reports {
            assert_eq!(report.config.preparation(), Preparation::Custom);
        }
        // Both-V HOM suppression holds only at the symmetric point.
        assert!(reports[0].stats.p_coincidence_total < EXACT_TOL);
        assert!(reports[2].stats.p_coincidence_total > 0.1);
    }

    #[test]
    fn optimizer_stops_below_the_mirror_bound() {
        let axis = SweepSpec::new(SweepParameter::RSq, 0.5, 1.0, 6).unwrap();
        let outcome = optimize(&case_one(0.6), &[axis], Objective::MaxCrossSideRate).unwrap();
        assert_eq!(outcome.best.len(), 1);
        assert_eq!(outcome.best[0].0, SweepParameter::RSq);
        assert!((outcome.best[0].1 - 0.9).abs() < 1e-15);
        assert_eq!(outcome.evaluated, 5);
        assert_eq!(outcome.skipped_at_mirror, 1);
        // Cross-side total is (2 r_sq - 1)^2 for case 1.
        assert!((outcome.best_value - 0.64).abs() < EXACT_TOL);
        let text = outcome.to_string();
        assert!(text.starts_with("best r_sq = 0.9\nobjective max_cross_side_rate = 0.64"));
        assert!(text.ends_with("evaluated 5 grid points (1 skipped at the mirror bound)"));
    }

    #[test]
    fn balance_objective_ties_resolve_to_smallest_r_sq() {
        let axis = SweepSpec::new(SweepParameter::RSq, 0.5, 0.95, 10).unwrap();
        let outcome = optimize(&case_one(0.6), &[axis], Objective::TargetBalance).unwrap();
        // Nonpolarizing splitters keep the two targets identical, so
        // every point scores zero and the first grid point wins.
        assert_eq!(outcome.best[0].1, 0.5);
        assert_eq!(outcome.best_value, 0.0);
        assert_eq!(outcome.evaluated, 10);
    }

    #[test]
    fn two_axis_search_reports_axes_in_canonical_order() {
        let eps_axis = SweepSpec::new(SweepParameter::Eps, -0.3, 0.3, 3).unwrap();
        let r_axis = SweepSpec::new(SweepParameter::RSq, 0.5, 0.9, 3).unwrap();
        // Pass axes in reverse canonical order on purpose.
        let outcome = optimize(
            &case_one(0.6),
            &[eps_axis, r_axis],
            Objective::MaxMinBellCoefficient,
        )
        .unwrap();
        assert_eq!(outcome.best[0].0, SweepParameter::RSq);
        assert_eq!(outcome.best[1].0, SweepParameter::Eps);
        assert!((outcome.best[0].1 - 0.9).abs() < 1e-15);
        assert_eq!(outcome.best[1].1, 0.0);
        assert_eq!(outcome.evaluated, 9);
    }

    #[test]
    fn empty_axis_list_evaluates_the_base_configuration() {
        let outcome = optimize(&case_one(0.6), &[], Objective::MaxCrossSideRate).unwrap();
        assert!(outcome.best.is_empty());
        assert_eq!(outcome.evaluated, 1);
        assert!((outcome.best_value - 0.04).abs() < EXACT_TOL);
    }

    #[test]
    fn duplicate_axes_are_rejected() {
        let a = SweepSpec::new(SweepParameter::Gamma, 0.0, 0.5, 3).unwrap();
        let b = SweepSpec::new(SweepParameter::Gamma, 0.5, 1.0, 3).unwrap();
        let err = optimize(&case_one(0.6), &[a, b], Objective::MaxCrossSideRate).unwrap_err();
        assert_eq!(
            err.to_string(),
            "invalid sweep 'gamma': duplicate optimization axis"
        );
    }

    #[test]
    fn bell_objectives_reject_custom_preparations() {
        let axis = SweepSpec::new(SweepParameter::RSq, 0.5, 0.9, 3).unwrap();
        for objective in [Objective::MaxMinBellCoefficient, Objective::TargetBalance] {
            let err = optimize(&both_v_symmetric(), std::slice::from_ref(&axis), objective).unwrap_err();
            assert!(err.to_string().contains(objective.name()));
        }
    }

    #[test]
    fn objective_names_round_trip() {
        for objective in [
            Objective::MaxCrossSideRate,
            Objective::MaxMinBellCoefficient,
            Objective::TargetBalance,
        ] {
            assert_eq!(objective.name().parse::<Objective>().unwrap(), objective);
        }
        let err = "fidelity".parse::<Objective>().unwrap_err();
        assert!(err.to_string().starts_with("unknown objective 'fidelity'"));
    }

    proptest! {
        #[test]
        fn grids_are_ascending_with_exact_endpoints(
            start in -1.0f64..0.0,
            span in 0.01f64..1.0,
            steps in 2usize..40,
        ) {
            let stop = start + span;
            let spec = SweepSpec::new(SweepParameter::Eps, start, stop, steps).unwrap();
            let values = spec.values();
            prop_assert_eq!(values.len(), steps);
            prop_assert_eq!(values[0], start);
            prop_assert_eq!(values[steps - 1], stop);
            for pair in values.windows(2) {
                prop_assert!(pair[0] < pair[1]);
            }
        }
    }
}
