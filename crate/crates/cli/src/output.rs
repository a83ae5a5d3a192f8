//! Number rendering and JSON helpers.

use serde::Serialize;
use serde_json::{Number, Value};

/// Rounds to 12 significant digits.
pub fn sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// 12 significant digits, without trailing zeros.
pub fn human(x: f64) -> String {
    let r = sig(x);
    if r == 0.0 {
        return "0".to_string();
    }
    if !(1e-4..1e12).contains(&r.abs()) {
        return format!("{r:e}");
    }
    r.to_string()
}

/// Floats anywhere in `value` are rounded with [`sig`].
fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(sig).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut value = serde_json::to_value(value).expect("serializable");
    round_floats(&mut value);
    let mut out = serde_json::to_vec_pretty(&value).expect("serializable");
    out.push(b'\n');
    out
}

pub fn lines(items: impl IntoIterator<Item = String>) -> Vec<u8> {
    let mut out = String::new();
    for item in items {
        out.push_str(&item);
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(human(2.0 * 2f64.sqrt()), "2.82842712475");
        assert_eq!(human(-0.0), "0");
        assert_eq!(human(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig(1e-20), 1e-20);
        assert_eq!(human(-3.789370861543e-8), "-3.78937086154e-8");
    }
}
