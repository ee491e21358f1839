//! Number formatting shared by the JSON and CSV writers.

use serde_json::{Number, Value};

/// `%.17g` rendering: 17 significant digits, trailing zeros removed, exponent
/// form outside `[1e-4, 1e17)`.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    strip_zeros(&format!("{x:.decimals$}")).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// JSON value for a float: a number with `g17` digits, or the strings
/// `"inf"`, `"-inf"` and `"nan"` for non-finite values.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(g17(x).parse::<Number>().expect("g17 output is a valid JSON number"))
    } else {
        Value::String(g17(x))
    }
}

pub fn json_vec(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json_f64(x)).collect())
}

pub fn json_pair(p: (f64, f64)) -> Value {
    json_vec(&[p.0, p.1])
}
