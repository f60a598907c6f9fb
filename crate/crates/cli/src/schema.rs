//! Structural validation of the reports `conj` emits.

use serde_json::{Map, Value};

#[derive(Clone, Copy)]
enum Ty {
    Bool,
    Int,
    Num,
    /// A number or null.
    OptNum,
    Str,
    Array,
    Object,
    /// Anything, including null.
    Any,
}

fn check(obj: &Map<String, Value>, key: &str, ty: Ty) -> Result<(), String> {
    let v = obj
        .get(key)
        .ok_or_else(|| format!("missing field {key:?}"))?;
    let ok = match ty {
        Ty::Bool => v.is_boolean(),
        Ty::Int => v.is_i64() || v.is_u64(),
        Ty::Num => v.is_number(),
        Ty::OptNum => v.is_number() || v.is_null(),
        Ty::Str => v.is_string(),
        Ty::Array => v.is_array(),
        Ty::Object => v.is_object(),
        Ty::Any => true,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("field {key:?} has the wrong type: {v}"))
    }
}

fn fields(command: &str) -> Option<&'static [(&'static str, Ty)]> {
    use Ty::*;
    Some(match command {
        "finite" => &[("conjugate", Bool), ("witness", Any), ("canonical", Array)],
        "canon" => &[
            ("canonical", Str),
            ("orbit_structure", Object),
            ("fixed_points", Array),
        ],
        "char-space" => &[("points", Array), ("radius", Num)],
        "norms" => &[
            ("estimate", Num),
            ("N", Int),
            ("monotone_check", Bool),
            ("l1_norm", Num),
            ("convention", Str),
            ("points", Array),
            ("edge_warning", Bool),
        ],
        "pencil-check" => &[
            ("seed", Int),
            ("characters", Array),
            ("second_over_eta_x", Bool),
            ("shift_image", Array),
            ("max_deviation", Num),
            ("homomorphism", Bool),
        ],
        "disk classify" => &[
            ("map", Object),
            ("kind", Str),
            ("fixed_points", Array),
            ("multiplier", Array),
            ("normal_form", Object),
            ("chart", Object),
        ],
        "disk conjugate" => &[("conjugate", Bool), ("witness", Any), ("deviation", OptNum)],
        "disk iso" => &[("verdict", Str), ("witness", Any), ("deviation", OptNum)],
        "disk verify-witness" => &[("deviation", OptNum), ("samples", Int), ("finite", Bool)],
        "verify-suite" => &[
            ("seed", Int),
            ("sizes", Object),
            ("passed", Bool),
            ("total_cases", Int),
            ("failed_cases", Int),
            ("properties", Array),
        ],
        "validate-report" => &[("valid", Bool)],
        _ => return None,
    })
}

const PROPERTY_FIELDS: [(&str, Ty); 8] = [
    ("name", Ty::Str),
    ("module", Ty::Str),
    ("cases", Ty::Int),
    ("passed", Ty::Int),
    ("failed", Ty::Int),
    ("max_deviation", Ty::OptNum),
    ("tolerance", Ty::Num),
    ("failure", Ty::Any),
];

/// Checks a report; returns its command name.
pub fn validate(report: &Value) -> Result<String, String> {
    let obj = report.as_object().ok_or("report must be a JSON object")?;
    check(obj, "command", Ty::Str)?;
    check(obj, "exit_code", Ty::Int)?;
    let command = obj["command"].as_str().expect("checked").to_string();
    if let Some(err) = obj.get("error") {
        let err = err.as_object().ok_or("\"error\" must be an object")?;
        check(err, "code", Ty::Str)?;
        check(err, "message", Ty::Str)?;
        if obj["exit_code"].as_i64() == Some(0) {
            return Err("error report with exit code 0".into());
        }
        return Ok(command);
    }
    let expected = fields(&command).ok_or_else(|| format!("unknown command {command:?}"))?;
    for &(key, ty) in expected {
        check(obj, key, ty)?;
    }
    if command == "verify-suite" {
        for p in obj["properties"].as_array().expect("checked") {
            let p = p.as_object().ok_or("property entries must be objects")?;
            for (key, ty) in PROPERTY_FIELDS {
                check(p, key, ty)?;
            }
        }
    }
    Ok(command)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn accepts_and_rejects() {
        let ok = json!({"command": "disk iso", "exit_code": 0, "verdict": "Conjugate", "witness": null, "deviation": null});
        assert_eq!(validate(&ok).unwrap(), "disk iso");
        let missing = json!({"command": "disk iso", "exit_code": 0, "verdict": "Conjugate"});
        assert!(validate(&missing).is_err());
        let err = json!({"command": "finite", "exit_code": 2, "error": {"code": "Parse", "message": "bad"}});
        assert!(validate(&err).is_ok());
        let bad_err = json!({"command": "finite", "exit_code": 0, "error": {"code": "Parse", "message": "bad"}});
        assert!(validate(&bad_err).is_err());
        assert!(validate(&json!([1])).is_err());
        assert!(validate(&json!({"command": "nope", "exit_code": 0})).is_err());
    }
}
