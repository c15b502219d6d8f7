//! Fixed-precision number formatting for reports.

use serde_json::Value;

pub const SIG_DIGITS: usize = 12;

/// `x` with [`SIG_DIGITS`] significant digits, plain decimal where practical.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{:.*e}", SIG_DIGITS - 1, x);
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every float in a JSON tree to [`SIG_DIGITS`] significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .map(round_sig)
            .and_then(serde_json::Number::from_f64)
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_json).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}
