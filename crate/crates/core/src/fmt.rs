//! Fixed numeric formatting for byte-stable text output.

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros removed,
/// scientific notation when the exponent is below -5 or at least 12.
pub fn g12(x: f64) -> String {
    g(x, 12)
}

/// `%.{prec}g`.
pub fn g(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let prec = prec.max(1);
    let sci = format!("{:.*e}", prec - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= prec as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (prec as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(-2.5), "-2.5");
        assert_eq!(g12(0.1), "0.1");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(123456789012.0), "123456789012");
        assert_eq!(g12(1234567890123.0), "1.23456789012e+12");
        assert_eq!(g12(0.0001), "0.0001");
        assert_eq!(g12(0.00001), "1e-05");
        assert_eq!(g12(-35.0), "-35");
        assert_eq!(g12(9.9999999999999), "10");
        assert_eq!(g12(f64::INFINITY), "inf");
    }
}
