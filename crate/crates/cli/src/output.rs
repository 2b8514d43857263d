//! Rendering helpers: every float is printed with 12 significant digits.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

pub const SIGNIFICANT: usize = 12;

/// Round to [`SIGNIFICANT`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT - 1, x).parse().unwrap_or(x)
}

pub fn real(x: f64) -> String {
    format!("{}", round_sig(x))
}

pub fn complex(z: Complex64) -> String {
    let (re, im) = (round_sig(z.re), round_sig(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => format!("{re}"),
        (true, false) => format!("{im}i"),
        _ if im < 0.0 => format!("{re}-{}i", -im),
        _ => format!("{re}+{im}i"),
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0));
            if let Some(m) = serde_json::Number::from_f64(x) {
                *n = m;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Compact JSON with rounded floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_value(&mut v);
    serde_json::to_string(&v).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(real(0.1 + 0.2), "0.3");
        assert_eq!(real(1.0 / 3.0), "0.333333333333");
        assert_eq!(complex(Complex64::new(0.0, 0.5)), "0.5i");
        assert_eq!(complex(Complex64::new(1.0, -2.0)), "1-2i");
        assert_eq!(to_json(&vec![2.0 / 3.0]), "[0.666666666667]");
        assert_eq!(to_json(&serde_json::json!({"k": 3})), r#"{"k":3}"#);
    }
}
