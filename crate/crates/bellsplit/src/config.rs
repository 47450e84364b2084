//! Flat key-value config files for [`ScenarioConfig`].
//!
//! One `key = value` per line; `#` starts a comment; blank lines are
//! skipped. Recognized keys:
//!
//! ```text
//! case        0 (custom), 1 or 2 (standard arrangements; default 1)
//! r_v, r_h    reflection magnitudes (default sqrt(0.6) each)
//! r_sq        shared reflectance r^2 for both polarizations
//!             (sets r_v = r_h exactly; conflicts with r_v/r_h)
//! sign        1 or -1, transmission phase (default 1)
//! gamma       temporal overlap in [0, 1] (default 1)
//! eps, eps_prime   preparation tilt angles, cases 1 and 2 only
//! alpha_re, alpha_im, beta_re, beta_im             arm a amplitudes
//! alpha_prime_re, alpha_prime_im, beta_prime_re,
//! beta_prime_im                                    arm b amplitudes
//! ```
//!
//! Amplitude keys are required (all eight) for `case = 0` and optional
//! for cases 1 and 2, where they are cross-checked against the tilt
//! angles. Polarization rotations have no file representation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path as FsPath;

use num_complex::Complex64;

use crate::bs::{BeamSplitterParams, TransmissionSign};
use crate::circuit::{BellCase, Preparation, ScenarioConfig};
use crate::error::{Error, Result};
use crate::jones::JonesVector;
use crate::EXACT_TOL;

const AMPLITUDE_KEYS: [&str; 8] = [
    "alpha_re",
    "alpha_im",
    "beta_re",
    "beta_im",
    "alpha_prime_re",
    "alpha_prime_im",
    "beta_prime_re",
    "beta_prime_im",
];

const KNOWN_KEYS: [&str; 16] = [
    "case",
    "r_v",
    "r_h",
    "r_sq",
    "sign",
    "gamma",
    "eps",
    "eps_prime",
    "alpha_re",
    "alpha_im",
    "beta_re",
    "beta_im",
    "alpha_prime_re",
    "alpha_prime_im",
    "beta_prime_re",
    "beta_prime_im",
];

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::ConfigParse {
        line,
        message: message.into(),
    }
}

/// Raw entries keyed by name, remembering where each was written.
struct Entries(BTreeMap<String, (usize, String)>);

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_error(line, "expected 'key = value'"))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(parse_error(line, "expected 'key = value'"));
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(parse_error(line, format!("unknown key '{key}'")));
            }
            if map.contains_key(key) {
                return Err(parse_error(line, format!("duplicate key '{key}'")));
            }
            map.insert(key.to_string(), (line, value.to_string()));
        }
        Ok(Entries(map))
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.0.get(key).map(|(line, _)| *line)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<(usize, f64)>> {
        match self.0.remove(key) {
            None => Ok(None),
            Some((line, raw)) => {
                let value: f64 = raw
                    .parse()
                    .map_err(|_| parse_error(line, format!("invalid number for '{key}': '{raw}'")))?;
                Ok(Some((line, value)))
            }
        }
    }

    fn take_int(&mut self, key: &str) -> Result<Option<(usize, i64)>> {
        match self.0.remove(key) {
            None => Ok(None),
            Some((line, raw)) => {
                let value: i64 = raw
                    .parse()
                    .map_err(|_| parse_error(line, format!("invalid integer for '{key}': '{raw}'")))?;
                Ok(Some((line, value)))
            }
        }
    }
}

fn resolve_splitter(e: &mut Entries) -> Result<BeamSplitterParams> {
    let sign = match e.take_int("sign")? {
        None => TransmissionSign::PlusI,
        Some((_, 1)) => TransmissionSign::PlusI,
        Some((_, -1)) => TransmissionSign::MinusI,
        Some((line, other)) => {
            return Err(parse_error(line, format!("sign must be 1 or -1, got {other}")))
        }
    };
    let r_sq = e.take_f64("r_sq")?;
    let r_v = e.take_f64("r_v")?;
    let r_h = e.take_f64("r_h")?;
    if let Some((line, _)) = r_sq {
        if let Some((other_line, _)) = r_v.or(r_h) {
            let _ = other_line;
            return Err(parse_error(
                line,
                "r_sq conflicts with r_v/r_h; give either the shared reflectance or the two magnitudes",
            ));
        }
        let (line, value) = r_sq.unwrap();
        return BeamSplitterParams::from_r_squared(value, sign)
            .map_err(|err| parse_error(line, err.to_string()));
    }
    let default_r = 0.6f64.sqrt();
    let (line_v, value_v) = r_v.unwrap_or((0, default_r));
    let (line_h, value_h) = r_h.unwrap_or((0, default_r));
    BeamSplitterParams::new(value_v, value_h, sign).map_err(|err| {
        let line = match &err {
            Error::OutOfRange { name: "r_h", .. } => line_h,
            _ => line_v,
        };
        parse_error(line, err.to_string())
    })
}

fn take_amplitudes(e: &mut Entries) -> Result<Option<[(usize, f64); 8]>> {
    let present = AMPLITUDE_KEYS
        .iter()
        .filter(|k| e.line_of(k).is_some())
        .count();
    if present == 0 {
        return Ok(None);
    }
    if present < AMPLITUDE_KEYS.len() {
        return Err(Error::ConfigInvalid(format!(
            "amplitude keys must be given all together ({})",
            AMPLITUDE_KEYS.join(", ")
        )));
    }
    let mut out = [(0usize, 0.0f64); 8];
    for (slot, key) in out.iter_mut().zip(AMPLITUDE_KEYS.iter()) {
        *slot = e.take_f64(key)?.expect("presence checked above");
    }
    Ok(Some(out))
}

fn jones_from_values(values: &[(usize, f64)], what: &'static str) -> Result<JonesVector> {
    let alpha = Complex64::new(values[0].1, values[1].1);
    let beta = Complex64::new(values[2].1, values[3].1);
    JonesVector::new(alpha, beta).map_err(|err| parse_error(values[0].0, format!("{what}: {err}")))
}

impl ScenarioConfig {
    /// Parses the key-value format described at the module level.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut e = Entries::parse(text)?;

        let case = match e.take_int("case")? {
            None => Some(BellCase::One),
            Some((_, 0)) => None,
            Some((_, 1)) => Some(BellCase::One),
            Some((_, 2)) => Some(BellCase::Two),
            Some((line, other)) => {
                return Err(parse_error(line, format!("case must be 0, 1 or 2, got {other}")))
            }
        };

        let bs = resolve_splitter(&mut e)?;

        let gamma = match e.take_f64("gamma")? {
            None => 1.0,
            Some((line, value)) => {
                if !(0.0..=1.0).contains(&value) || value.is_nan() {
                    let err = Error::OutOfRange {
                        name: "gamma",
                        value,
                        min: 0.0,
                        max: 1.0,
                    };
                    return Err(parse_error(line, err.to_string()));
                }
                value
            }
        };

        let eps = e.take_f64("eps")?;
        let eps_prime = e.take_f64("eps_prime")?;
        let amplitudes = take_amplitudes(&mut e)?;

        match case {
            Some(case) => {
                let eps = eps.map_or(0.0, |(_, v)| v);
                let eps_prime = eps_prime.map_or(0.0, |(_, v)| v);
                let config = crate::bell::case_config(case, bs, eps, eps_prime, gamma)?;
                if let Some(values) = amplitudes {
                    let expected = [
                        config.ja().alpha().re,
                        config.ja().alpha().im,
                        config.ja().beta().re,
                        config.ja().beta().im,
                        config.jb().alpha().re,
                        config.jb().alpha().im,
                        config.jb().beta().re,
                        config.jb().beta().im,
                    ];
                    for ((key, (line, given)), want) in
                        AMPLITUDE_KEYS.iter().zip(values.iter()).zip(expected.iter())
                    {
                        if (given - want).abs() > EXACT_TOL {
                            return Err(parse_error(
                                *line,
                                format!(
                                    "{key} = {given} is inconsistent with the case {} preparation (expected {want})",
                                    case.id()
                                ),
                            ));
                        }
                    }
                }
                Ok(config)
            }
            None => {
                if let Some((line, _)) = eps {
                    return Err(parse_error(line, "eps requires case 1 or 2"));
                }
                if let Some((line, _)) = eps_prime {
                    return Err(parse_error(line, "eps_prime requires case 1 or 2"));
                }
                let values = amplitudes.ok_or_else(|| {
                    Error::ConfigInvalid(format!(
                        "case 0 requires the amplitude keys ({})",
                        AMPLITUDE_KEYS.join(", ")
                    ))
                })?;
                let ja = jones_from_values(&values[0..4], "arm a amplitudes")?;
                let jb = jones_from_values(&values[4..8], "arm b amplitudes")?;
                ScenarioConfig::custom(ja, jb, bs, gamma)
            }
        }
    }

    /// Reads and parses a config file.
    pub fn load(path: &FsPath) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_config(&text)
    }

    /// Renders the config in the same key-value format. Fails for
    /// configs carrying polarization rotations, which the format cannot
    /// express; fold those into the input amplitudes instead.
    pub fn to_config_string(&self) -> Result<String> {
        if !self.rot_a().is_identity() || !self.rot_b().is_identity() {
            return Err(Error::Unsupported(
                "polarization rotations have no config-file representation".into(),
            ));
        }
        let case_id = match self.preparation() {
            Preparation::Case(case) => case.id(),
            Preparation::Custom => 0,
        };
        let bs = self.beam_splitter();
        let mut out = String::new();
        let mut put = |key: &str, value: String| {
            writeln!(out, "{key} = {value}").expect("string write");
        };
        put("case", case_id.to_string());
        put("r_v", bs.r_v().to_string());
        put("r_h", bs.r_h().to_string());
        put("sign", bs.sign().to_string());
        put("gamma", self.gamma().to_string());
        if case_id != 0 {
            put("eps", self.eps().to_string());
            put("eps_prime", self.eps_prime().to_string());
        }
        let values = [
            ("alpha_re", self.ja().alpha().re),
            ("alpha_im", self.ja().alpha().im),
            ("beta_re", self.ja().beta().re),
            ("beta_im", self.ja().beta().im),
            ("alpha_prime_re", self.jb().alpha().re),
            ("alpha_prime_im", self.jb().alpha().im),
            ("beta_prime_re", self.jb().beta().re),
            ("beta_prime_im", self.jb().beta().im),
        ];
        for (key, value) in values {
            put(key, value.to_string());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jones::PolarizationRotation;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn parse(text: &str) -> ScenarioConfig {
        ScenarioConfig::parse_config(text).unwrap()
    }

    fn parse_err(text: &str) -> Error {
        ScenarioConfig::parse_config(text).unwrap_err()
    }

    #[test]
    fn an_empty_config_is_the_default_arrangement() {
        let config = parse("");
        assert_eq!(config.preparation(), Preparation::Case(BellCase::One));
        assert_eq!(config.gamma(), 1.0);
        assert_eq!(config.eps(), 0.0);
        assert!((config.beam_splitter().r_v() - 0.6f64.sqrt()).abs() == 0.0);
        assert_eq!(config.ja().alpha().re, FRAC_1_SQRT_2);
    }

    #[test]
    fn comments_blank_lines_and_spacing_are_tolerated() {
        let config = parse(
            "# scenario\n\n  case = 2   # the minus pair\nr_sq=0.7\n\tgamma =  0.9\n",
        );
        assert_eq!(config.preparation(), Preparation::Case(BellCase::Two));
        assert_eq!(config.gamma(), 0.9);
        assert!((config.beam_splitter().r_v() - 0.7f64.sqrt()).abs() == 0.0);
    }

    #[test]
    fn shared_reflectance_sets_both_polarizations_exactly() {
        let config = parse("r_sq = 0.5");
        let bs = config.beam_splitter();
        assert_eq!(bs.r_v(), bs.t_v());
        assert_eq!(bs.r_v(), bs.r_h());
    }

    #[test]
    fn shared_and_split_reflectance_conflict() {
        let err = parse_err("r_v = 0.7\nr_sq = 0.5");
        match err {
            Error::ConfigParse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("conflicts"), "{message}");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn out_of_range_values_name_the_key_and_its_domain() {
        let err = parse_err("gamma = 1.5");
        assert_eq!(
            err.to_string(),
            "config line 1: gamma = 1.5 is outside [0, 1]"
        );
        let err = parse_err("case = 1\nr_v = 1.2");
        let text = err.to_string();
        assert!(text.contains("line 2"), "{text}");
        assert!(text.contains("r_v"), "{text}");
    }

    #[test]
    fn unknown_duplicate_and_malformed_lines_are_named() {
        assert_eq!(
            parse_err("r_t = 0.5").to_string(),
            "config line 1: unknown key 'r_t'"
        );
        assert_eq!(
            parse_err("gamma = 1\ngamma = 0.5").to_string(),
            "config line 2: duplicate key 'gamma'"
        );
        assert_eq!(
            parse_err("gamma").to_string(),
            "config line 1: expected 'key = value'"
        );
        assert_eq!(
            parse_err("gamma = fast").to_string(),
            "config line 1: invalid number for 'gamma': 'fast'"
        );
        assert_eq!(
            parse_err("case = 3").to_string(),
            "config line 1: case must be 0, 1 or 2, got 3"
        );
        assert_eq!(
            parse_err("sign = 2").to_string(),
            "config line 1: sign must be 1 or -1, got 2"
        );
    }

    #[test]
    fn custom_case_takes_explicit_amplitudes() {
        let config = parse(
            "case = 0\nr_sq = 0.5\nalpha_re = 1\nalpha_im = 0\nbeta_re = 0\nbeta_im = 0\n\
             alpha_prime_re = 1\nalpha_prime_im = 0\nbeta_prime_re = 0\nbeta_prime_im = 0\n",
        );
        assert_eq!(config.preparation(), Preparation::Custom);
        assert_eq!(config.ja().alpha().re, 1.0);
        assert_eq!(config.jb().beta().re, 0.0);
    }

    #[test]
    fn custom_case_requires_the_full_amplitude_set() {
        let err = parse_err("case = 0\nalpha_re = 1");
        assert!(matches!(err, Error::ConfigInvalid(_)), "{err}");
        let err = parse_err("case = 0");
        assert!(err.to_string().contains("alpha_re"), "{err}");
    }

    #[test]
    fn tilt_angles_require_a_case_arrangement() {
        let err = parse_err(
            "case = 0\neps = 0.1\nalpha_re = 1\nalpha_im = 0\nbeta_re = 0\nbeta_im = 0\n\
             alpha_prime_re = 1\nalpha_prime_im = 0\nbeta_prime_re = 0\nbeta_prime_im = 0\n",
        );
        assert_eq!(err.to_string(), "config line 2: eps requires case 1 or 2");
    }

    #[test]
    fn unnormalized_custom_amplitudes_are_rejected_with_a_line() {
        let err = parse_err(
            "case = 0\nalpha_re = 1\nalpha_im = 0\nbeta_re = 0.5\nbeta_im = 0\n\
             alpha_prime_re = 1\nalpha_prime_im = 0\nbeta_prime_re = 0\nbeta_prime_im = 0\n",
        );
        let text = err.to_string();
        assert!(text.contains("line 2"), "{text}");
        assert!(text.contains("arm a"), "{text}");
    }

    #[test]
    fn case_amplitudes_are_cross_checked() {
        let good = format!(
            "case = 2\nalpha_re = {f}\nalpha_im = 0\nbeta_re = {f}\nbeta_im = 0\n\
             alpha_prime_re = {f}\nalpha_prime_im = 0\nbeta_prime_re = {m}\nbeta_prime_im = 0\n",
            f = FRAC_1_SQRT_2,
            m = -FRAC_1_SQRT_2,
        );
        let config = parse(&good);
        assert_eq!(config.preparation(), Preparation::Case(BellCase::Two));

        let bad = good.replace(&format!("beta_prime_re = {}", -FRAC_1_SQRT_2), "beta_prime_re = 0.7");
        let err = ScenarioConfig::parse_config(&bad).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("beta_prime_re"), "{text}");
        assert!(text.contains("inconsistent"), "{text}");
    }

    #[test]
    fn rendering_and_reparsing_reproduces_the_scenario() {
        let original = parse("case = 2\nr_v = 0.9\nr_h = 0.55\nsign = -1\ngamma = 0.8\neps = 0.03\neps_prime = -0.11");
        let text = original.to_config_string().unwrap();
        let reparsed = parse(&text);
        assert_eq!(reparsed.preparation(), original.preparation());
        assert_eq!(reparsed.gamma(), original.gamma());
        assert_eq!(reparsed.eps(), original.eps());
        assert_eq!(reparsed.eps_prime(), original.eps_prime());
        assert_eq!(reparsed.beam_splitter().r_v(), original.beam_splitter().r_v());
        assert_eq!(reparsed.beam_splitter().sign(), original.beam_splitter().sign());
        assert_eq!(reparsed.ja().alpha(), original.ja().alpha());
        assert_eq!(reparsed.jb().beta(), original.jb().beta());
    }

    #[test]
    fn custom_configs_round_trip_too() {
        let original = parse(
            "case = 0\nr_sq = 0.5\ngamma = 0.25\nalpha_re = 1\nalpha_im = 0\nbeta_re = 0\nbeta_im = 0\n\
             alpha_prime_re = 0\nalpha_prime_im = 0\nbeta_prime_re = 0\nbeta_prime_im = 1\n",
        );
        let text = original.to_config_string().unwrap();
        assert!(text.contains("case = 0"));
        assert!(!text.contains("eps"));
        let reparsed = parse(&text);
        assert_eq!(reparsed.preparation(), Preparation::Custom);
        assert_eq!(reparsed.jb().beta(), original.jb().beta());
        assert_eq!(reparsed.gamma(), 0.25);
    }

    #[test]
    fn rotations_cannot_be_rendered() {
        let config = ScenarioConfig::default()
            .with_rotations(PolarizationRotation::rotation(0.2), PolarizationRotation::identity());
        assert!(matches!(config.to_config_string(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn loading_a_missing_file_names_the_path() {
        let err = ScenarioConfig::load(FsPath::new("/nonexistent/scenario.conf")).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("/nonexistent/scenario.conf"), "{text}");
    }
}
