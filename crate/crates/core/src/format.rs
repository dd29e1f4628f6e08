//! Numeric text formatting shared by every CSV writer.

use std::fmt::Write;

/// Formats `x` the way C's `printf("%.12g", x)` does.
pub fn g12(x: f64) -> String {
    general(x, 12)
}

/// `%.{precision}g` formatting: `precision` significant digits, trailing zeros
/// removed, exponent notation when the decimal exponent is `< -4` or
/// `>= precision`.
pub fn general(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let p = precision.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    // Round to p significant digits first; the exponent of the rounded value
    // decides the style.
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");

    let mut out = String::new();
    if exp < -4 || exp >= p as i32 {
        out.push_str(strip_zeros(mantissa));
        let sign = if exp < 0 { '-' } else { '+' };
        write!(out, "e{}{:02}", sign, exp.abs()).unwrap();
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        out.push_str(strip_zeros(&fixed));
    }
    out
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
