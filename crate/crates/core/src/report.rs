//! Machine-readable JSON reports: stable key order (alphabetical), floats
//! printed with 17 significant digits so every value round-trips and
//! identical runs produce identical bytes.

use serde_json::Value;

use crate::error::{Error, Result};

/// Serializes a JSON tree with deterministic formatting. f64 values are
/// written as `d.dddddddddddddddde[-]d` (17 significant digits); integers
/// stay integers.
pub fn to_json_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(f) = n.as_f64().filter(|_| n.is_f64()) {
                write_f64(f, out);
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            // serde_json's map is ordered (BTreeMap), so iteration is stable
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serialization"));
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

fn write_f64(v: f64, out: &mut String) {
    if !v.is_finite() {
        // reports never carry non-finite values; null keeps the JSON valid
        out.push_str("null");
        return;
    }
    out.push_str(&format!("{v:.16e}"));
}

/// Validates the report schema shared by every CLI command: required keys
/// with the right JSON types.
pub fn validate_report(value: &Value) -> Result<()> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("report must be a JSON object".into()))?;
    let expect = |key: &str, pred: fn(&Value) -> bool, kind: &str| -> Result<()> {
        let v = obj
            .get(key)
            .ok_or_else(|| Error::Parse(format!("report missing key {key:?}")))?;
        if !pred(v) {
            return Err(Error::Parse(format!("report key {key:?} must be {kind}")));
        }
        Ok(())
    };
    expect("command", Value::is_string, "a string")?;
    expect("inputs", Value::is_object, "an object")?;
    expect("results", Value::is_object, "an object")?;
    expect("residuals", Value::is_object, "an object")?;
    expect("tolerances", Value::is_object, "an object")?;
    expect(
        "seed",
        |v| v.is_u64() || v.is_null(),
        "an unsigned integer or null",
    )?;
    expect("wall_time_ms", Value::is_number, "a number")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for v in [0.0, -0.0, 3.0, 1.0 / 3.0, -2.5e-9, 1e300, f64::MIN_POSITIVE] {
            let s = to_json_string(&json!(v));
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn integers_stay_integers() {
        assert_eq!(to_json_string(&json!(42)), "42");
        assert_eq!(to_json_string(&json!(-7)), "-7");
        assert_eq!(to_json_string(&json!(u64::MAX)), u64::MAX.to_string());
    }

    #[test]
    fn object_keys_are_sorted_and_stable() {
        let v = json!({"zeta": 1, "alpha": {"b": 2.0, "a": [1.0, 2]}});
        let s = to_json_string(&v);
        assert_eq!(
            s,
            "{\"alpha\":{\"a\":[1.0000000000000000e0,2],\"b\":2.0000000000000000e0},\"zeta\":1}"
        );
    }

    #[test]
    fn schema_validation() {
        let good = json!({
            "command": "eval",
            "inputs": {},
            "results": {},
            "residuals": {},
            "tolerances": {},
            "seed": null,
            "wall_time_ms": 1.5,
        });
        assert!(validate_report(&good).is_ok());
        let mut bad = good.clone();
        bad.as_object_mut().unwrap().remove("results");
        assert!(validate_report(&bad).is_err());
    }
}
