//! JSON formats for systems and skew polynomials.
//!
//! System: `{"n": int, "map": [int, ..]}`.
//! Polynomial: `{"system": <system or reference>, "coeffs": [[[re, im], ..], ..]}`
//! with the outer index the degree and the inner index the point. A string
//! in place of the system is a reference resolved by the caller.

use std::sync::Arc;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::diskmaps::{complex_from_json, complex_to_json};
use crate::dynsys::FiniteDynSys;
use crate::error::{Error, Result};
use crate::skewpoly::{CoefFn, SkewPoly};

pub fn system_from_json(v: &Value) -> Result<FiniteDynSys> {
    Ok(serde_json::from_value(v.clone())?)
}

pub fn system_to_json(sys: &FiniteDynSys) -> Value {
    serde_json::to_value(sys).expect("system serializes")
}

/// Parses a polynomial; `resolve` turns a string system reference into a
/// system.
pub fn poly_from_json<R>(v: &Value, resolve: R) -> Result<SkewPoly>
where
    R: FnOnce(&str) -> Result<FiniteDynSys>,
{
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("polynomial must be a JSON object".into()))?;
    let sys = match obj.get("system") {
        Some(Value::String(r)) => resolve(r)?,
        Some(s) => system_from_json(s)?,
        None => return Err(Error::Parse("polynomial needs \"system\"".into())),
    };
    let coeffs = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("polynomial needs a \"coeffs\" array".into()))?;
    let coeffs = coeffs
        .iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| {
                Error::Parse("each coefficient must be an array of [re, im]".into())
            })?;
            let vals: Vec<Complex64> = row.iter().map(complex_from_json).collect::<Result<_>>()?;
            Ok(CoefFn::new(vals))
        })
        .collect::<Result<Vec<_>>>()?;
    SkewPoly::new(Arc::new(sys), coeffs)
}

pub fn poly_to_json(p: &SkewPoly) -> Value {
    let coeffs: Vec<Value> = p
        .coeffs()
        .iter()
        .map(|f| Value::Array(f.values().iter().copied().map(complex_to_json).collect()))
        .collect();
    json!({ "system": system_to_json(p.system()), "coeffs": coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_refs(r: &str) -> Result<FiniteDynSys> {
        Err(Error::Parse(format!("unexpected reference {r}")))
    }

    #[test]
    fn polynomial_format() {
        let v = json!({
            "system": {"n": 2, "map": [1, 0]},
            "coeffs": [[[1.0, 0.0], [2.0, 0.0]], [[0.0, 1.0], [0.0, -1.0]]]
        });
        let p = poly_from_json(&v, no_refs).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coefficient(1)[0], Complex64::new(0.0, 1.0));
        assert_eq!(poly_to_json(&p), v);
    }

    #[test]
    fn system_reference_is_resolved() {
        let v = json!({"system": "sys.json", "coeffs": [[[1.0, 0.0]]]});
        let p = poly_from_json(&v, |r| {
            assert_eq!(r, "sys.json");
            FiniteDynSys::identity(1)
        })
        .unwrap();
        assert_eq!(p.system().size(), 1);
    }

    #[test]
    fn malformed_inputs() {
        assert!(poly_from_json(&json!({"coeffs": []}), no_refs).is_err());
        assert!(poly_from_json(
            &json!({"system": {"n": 1, "map": [0]}, "coeffs": [[[1.0]]]}),
            no_refs
        )
        .is_err());
        let wrong_len = json!({"system": {"n": 2, "map": [0, 1]}, "coeffs": [[[1.0, 0.0]]]});
        assert!(matches!(
            poly_from_json(&wrong_len, no_refs),
            Err(Error::CoefficientLength { .. })
        ));
        assert!(system_from_json(&json!({"n": 2, "map": [0, 5]})).is_err());
    }
}
