//! Report assembly: one evaluated scenario reduced to Bell coefficients,
//! detector statistics, and a fixed-order CSV row.
//!
//! Formatting is deterministic: 12 significant digits, '.' decimal
//! separator, LF line endings. Identical configurations produce
//! byte-identical rows.

use crate::bell::{
    bell_decompose, fidelity_direct, fidelity_ratio, BellCoefficients, BellFamily,
    DetectionStats, FidelityReport,
};
use crate::circuit::{
    simulate_scenario, Preparation, ScenarioConfig, ScenarioOutput, ScenarioWarning,
};
use crate::numfmt::g12;

macro_rules! csv_columns {
    () => {
        "case,r_v,r_h,gamma,eps,eps_prime,\
         abs_c_phi_plus,abs_c_phi_minus,abs_c_psi_plus,abs_c_psi_minus,\
         p_AhBh,p_AhBv,p_AvBh,p_AvBv,p_same_side_total,\
         fidelity_phi,fidelity_psi"
    };
}

/// Column order is fixed; consumers may rely on it byte for byte.
pub const CSV_HEADER: &str = csv_columns!();

/// Sweep tables carry two extra columns holding the brute-force
/// overlap-ratio fidelities, so the closed-form law and the direct
/// simulation can be compared pointwise.
pub const SWEEP_CSV_HEADER: &str =
    concat!(csv_columns!(), ",fidelity_phi_direct,fidelity_psi_direct");

/// Everything reported about one evaluated configuration. The Bell
/// coefficients always describe the interfering branch; for gamma < 1
/// the detector statistics additionally mix in the distinguishable
/// branch.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub config: ScenarioConfig,
    pub output: ScenarioOutput,
    pub coefficients: BellCoefficients,
    pub stats: DetectionStats,
    /// Closed-form perturbation fidelities; case preparations only.
    pub fidelity: Option<FidelityReport>,
    pub warnings: Vec<ScenarioWarning>,
}

pub fn evaluate_scenario(config: &ScenarioConfig) -> ScenarioReport {
    let output = simulate_scenario(config);
    let coefficients = bell_decompose(output.interfering_state());
    let stats = DetectionStats::from_output(&output);
    let fidelity = match config.preparation() {
        Preparation::Case(case) => Some(fidelity_ratio(case, config.eps(), config.eps_prime())),
        Preparation::Custom => None,
    };
    ScenarioReport {
        config: config.clone(),
        output,
        coefficients,
        stats,
        fidelity,
        warnings: config.warnings(),
    }
}

fn opt_g12(value: Option<f64>) -> String {
    match value {
        Some(v) => g12(v),
        None => "nan".to_string(),
    }
}

impl ScenarioReport {
    fn base_fields(&self) -> Vec<String> {
        let bs = self.config.beam_splitter();
        let case_id = match self.config.preparation() {
            Preparation::Case(case) => case.id(),
            Preparation::Custom => 0,
        };
        vec![
            case_id.to_string(),
            g12(bs.r_v()),
            g12(bs.r_h()),
            g12(self.config.gamma()),
            g12(self.config.eps()),
            g12(self.config.eps_prime()),
            g12(self.coefficients.c_phi_plus.norm()),
            g12(self.coefficients.c_phi_minus.norm()),
            g12(self.coefficients.c_psi_plus.norm()),
            g12(self.coefficients.c_psi_minus.norm()),
            g12(self.stats.p_ah_bh),
            g12(self.stats.p_ah_bv),
            g12(self.stats.p_av_bh),
            g12(self.stats.p_av_bv),
            g12(self.stats.same_side_total()),
            opt_g12(self.fidelity.map(|f| f.fidelity_phi)),
            opt_g12(self.fidelity.map(|f| f.fidelity_psi)),
        ]
    }

    /// One row in the `CSV_HEADER` column order. Custom preparations
    /// report case 0 and "nan" in the fidelity columns (no perturbation
    /// law applies to them).
    pub fn csv_row(&self) -> String {
        self.base_fields().join(",")
    }

    /// Row in the `SWEEP_CSV_HEADER` order. The direct columns are
    /// "nan" for custom preparations and for arrangements whose
    /// unperturbed target overlap vanishes (the ratio is undefined
    /// there).
    pub fn sweep_csv_row(&self) -> String {
        let mut fields = self.base_fields();
        let (phi, psi) = self.direct_fidelities();
        fields.push(opt_g12(phi));
        fields.push(opt_g12(psi));
        fields.join(",")
    }

    fn direct_fidelities(&self) -> (Option<f64>, Option<f64>) {
        let Preparation::Case(case) = self.config.preparation() else {
            return (None, None);
        };
        let bs = *self.config.beam_splitter();
        let direct = |family| {
            fidelity_direct(case, family, self.config.eps(), self.config.eps_prime(), bs)
                .ok()
                .map(|ratio| ratio * ratio)
        };
        (direct(BellFamily::Phi), direct(BellFamily::Psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bs::{BeamSplitterParams, TransmissionSign};
    use crate::circuit::BellCase;
    use crate::jones::JonesVector;
    use crate::EXACT_TOL;
    use num_complex::Complex64;

    #[test]
    fn header_and_row_have_matching_field_counts() {
        let report = evaluate_scenario(&ScenarioConfig::default());
        assert_eq!(
            CSV_HEADER.split(',').count(),
            report.csv_row().split(',').count()
        );
        assert_eq!(
            SWEEP_CSV_HEADER.split(',').count(),
            report.sweep_csv_row().split(',').count()
        );
        assert!(SWEEP_CSV_HEADER.starts_with(CSV_HEADER));
    }

    #[test]
    fn default_scenario_row_is_stable() {
        let report = evaluate_scenario(&ScenarioConfig::default());
        assert_eq!(
            report.csv_row(),
            "1,0.774596669241,0.774596669241,1,0,0,\
             0.141421356237,0,0.141421356237,0,\
             0.01,0.01,0.01,0.01,0.96,1,1"
        );
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn sweep_row_direct_columns_match_law_at_defaults() {
        let report = evaluate_scenario(&ScenarioConfig::default());
        let row = report.sweep_csv_row();
        assert_eq!(row, format!("{},1,1", report.csv_row()));
    }

    #[test]
    fn perturbed_case_row_recomputes_both_fidelity_flavors() {
        let bs = BeamSplitterParams::from_r_squared(0.6, TransmissionSign::PlusI).unwrap();
        let config = crate::bell::case_config(BellCase::One, bs, 0.2, 0.1, 1.0).unwrap();
        let report = evaluate_scenario(&config);
        let fid = report.fidelity.unwrap();
        assert!((fid.fidelity_phi - 0.1f64.cos().powi(2)).abs() < EXACT_TOL);
        assert!((fid.fidelity_psi - 0.3f64.cos().powi(2)).abs() < EXACT_TOL);
        let (phi, psi) = report.direct_fidelities();
        assert!((phi.unwrap() - fid.fidelity_phi).abs() < 1e-10);
        assert!((psi.unwrap() - fid.fidelity_psi).abs() < 1e-10);
    }

    #[test]
    fn custom_preparation_reports_case_zero_and_nan_fidelities() {
        let ja = JonesVector::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let jb = JonesVector::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        let bs = BeamSplitterParams::from_r_squared(0.6, TransmissionSign::PlusI).unwrap();
        let config = ScenarioConfig::custom(ja, jb, bs, 1.0).unwrap();
        let report = evaluate_scenario(&config);
        let row = report.csv_row();
        assert!(row.starts_with("0,"));
        assert!(row.ends_with(",nan,nan"));
        assert!(report.fidelity.is_none());
        let sweep_row = report.sweep_csv_row();
        assert!(sweep_row.ends_with(",nan,nan,nan,nan"));
    }

    #[test]
    fn symmetric_splitter_case_row_zeroes_cross_side_and_loses_direct_ratio() {
        let bs = BeamSplitterParams::symmetric_50_50();
        let config = crate::bell::case_config(BellCase::One, bs, 0.0, 0.0, 1.0).unwrap();
        let report = evaluate_scenario(&config);
        assert!(report.stats.p_coincidence_total < EXACT_TOL);
        assert_eq!(
            report.warnings,
            vec![ScenarioWarning::DegenerateCrossSide]
        );
        // Law columns still evaluate; the overlap-ratio ones cannot.
        let row = report.sweep_csv_row();
        assert!(row.ends_with(",1,1,nan,nan"));
    }

    #[test]
    fn row_probabilities_sum_to_one() {
        let bs = BeamSplitterParams::from_r_squared(0.73, TransmissionSign::MinusI).unwrap();
        let config = crate::bell::case_config(BellCase::Two, bs, 0.1, -0.2, 0.6).unwrap();
        let report = evaluate_scenario(&config);
        assert!((report.stats.sum() - 1.0).abs() < EXACT_TOL);
        let row = report.csv_row();
        let fields: Vec<f64> = row
            .split(',')
            .skip(10)
            .take(5)
            .map(|f| f.parse().unwrap())
            .collect();
        let total: f64 = fields.iter().sum();
        assert!((total - 1.0).abs() < 1e-11);
    }
}
