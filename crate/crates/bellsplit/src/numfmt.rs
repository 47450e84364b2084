//! Deterministic plain-text formatting of floating point values with
//! twelve significant digits, as used by the CSV reports and state dumps.

/// Formats `x` with 12 significant digits. Values of moderate magnitude
/// are rendered positionally with trailing zeros trimmed; very small or
/// very large ones keep scientific notation. Negative zero collapses to
/// "0" so that byte-identical reruns do not depend on its sign.
pub(crate) fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always carries an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..=11).contains(&exp) {
        let decimals = (11 - exp) as usize;
        let positional = format!("{:.*}", decimals, x);
        let trimmed = positional.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::g12;

    #[test]
    fn integers_and_simple_fractions_stay_short() {
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(-0.0), "0");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(-1.0), "-1");
        assert_eq!(g12(0.01), "0.01");
        assert_eq!(g12(0.96), "0.96");
    }

    #[test]
    fn twelve_significant_digits_are_kept() {
        assert_eq!(g12(0.2 / std::f64::consts::SQRT_2), "0.141421356237");
        assert_eq!(g12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(g12(-0.489897948556636), "-0.489897948557");
    }

    #[test]
    fn extreme_magnitudes_use_scientific_notation() {
        assert_eq!(g12(1.5e-7), "1.5e-7");
        assert_eq!(g12(0.0001), "0.0001");
        assert_eq!(g12(0.00001), "1e-5");
        assert_eq!(g12(2.5e-13), "2.5e-13");
        assert_eq!(g12(3.0e14), "3e14");
        assert_eq!(g12(f64::NAN), "nan");
    }

    #[test]
    fn values_round_rather_than_truncate() {
        assert_eq!(g12(0.1234567890129), "0.123456789013");
    }
}
