//! Möbius self-maps of the closed unit disk: classification, analytic
//! conjugacy with explicit witnesses, and the isomorphism verdict for the
//! associated semicrossed products.

pub mod classify;
pub mod mobius;
pub mod witness;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

pub use classify::{
    classify, normal_form, DiskClassification, DiskKind, Location, NormalForm, Normalization,
};
pub use mobius::MobiusMap;
pub use witness::{disk_samples, verify_conjugacy_witness, verify_point_maps, PointMap};

use crate::error::{Error, Result};
use crate::par::Execution;

/// Deviation allowed when checking a Möbius witness on the probe grid.
pub const WITNESS_TOL: f64 = 1e-10;

/// A disk automorphism `gamma` with `gamma . eta1 = eta2 . gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugationWitnessMobius {
    pub gamma: MobiusMap,
    /// Largest deviation of the intertwining relation on the probe grid.
    pub deviation: f64,
}

/// Maximum of `|gamma(eta1(z)) - eta2(gamma(z))|` over the probe grid.
pub fn intertwining_deviation(
    gamma: &MobiusMap,
    m1: &MobiusMap,
    m2: &MobiusMap,
    exec: Execution,
) -> f64 {
    let grid = mobius::probe_grid();
    verify_point_maps(&(*gamma).into(), &(*m1).into(), &(*m2).into(), &grid, exec)
}

/// Decides analytic conjugacy (by a disk automorphism) of two Möbius disk
/// self-maps. Returns `Ok(None)` when the normal forms differ.
pub fn analytically_conjugate(
    m1: &MobiusMap,
    m2: &MobiusMap,
) -> Result<Option<ConjugationWitnessMobius>> {
    let n1 = normal_form(m1)?;
    let n2 = normal_form(m2)?;
    if n1.kind != n2.kind || !n1.form.approx_eq(&n2.form, classify::INVARIANT_TOL) {
        return Ok(None);
    }
    let gamma = n2.chart.inverse().compose(&n1.chart);
    let deviation = intertwining_deviation(&gamma, m1, m2, Execution::Sequential);
    debug_assert!(
        gamma.is_disk_automorphism(),
        "witness {gamma} is not a disk automorphism"
    );
    if !(deviation <= WITNESS_TOL && gamma.is_disk_automorphism()) {
        return Err(Error::NotDecidable(format!(
            "matching normal forms but the assembled witness deviates by {deviation:e}"
        )));
    }
    Ok(Some(ConjugationWitnessMobius { gamma, deviation }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsoVerdict {
    Conjugate,
    InverseConjugate,
    NotIsomorphic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoDecision {
    pub verdict: IsoVerdict,
    pub witness: Option<ConjugationWitnessMobius>,
}

/// Isomorphism of the semicrossed products of two disk maps: conjugacy, or
/// for elliptic automorphisms also conjugacy of `eta2` to `eta1^-1`.
pub fn semicrossed_iso_verdict(m1: &MobiusMap, m2: &MobiusMap) -> Result<IsoDecision> {
    if let Some(w) = analytically_conjugate(m1, m2)? {
        return Ok(IsoDecision {
            verdict: IsoVerdict::Conjugate,
            witness: Some(w),
        });
    }
    let k1 = classify(m1)?.kind;
    let k2 = classify(m2)?.kind;
    if k1 == DiskKind::EllipticAutomorphism && k2 == DiskKind::EllipticAutomorphism {
        if let Some(w) = analytically_conjugate(m1, &m2.inverse())? {
            return Ok(IsoDecision {
                verdict: IsoVerdict::InverseConjugate,
                witness: Some(w),
            });
        }
    }
    Ok(IsoDecision {
        verdict: IsoVerdict::NotIsomorphic,
        witness: None,
    })
}

/// The hyperbolic pair `z -> (z - t)/(1 - t z)`; `t = 1/2` and `t = 1/4`
/// are the standard example of topologically but not analytically
/// conjugate automorphisms.
pub fn real_translation(t: f64) -> MobiusMap {
    let one = Complex64::new(1.0, 0.0);
    let t = Complex64::new(t, 0.0);
    MobiusMap::new(one, -t, -t, one).expect("|t| < 1 gives a nonsingular map")
}

/// A disk map as read from JSON: either a Möbius map or a closed-form point
/// map usable only as a witness or for witness checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapInput {
    Mobius(MobiusMap),
    Point(PointMap),
}

impl MapInput {
    pub fn mobius(&self) -> Result<MobiusMap> {
        match self {
            MapInput::Mobius(m) => Ok(*m),
            MapInput::Point(p) => Err(Error::NotDecidable(format!(
                "{p:?} is not a Möbius map; only witness checks accept closed-form point maps"
            ))),
        }
    }

    pub fn as_point_map(&self) -> PointMap {
        match self {
            MapInput::Mobius(m) => PointMap::Mobius(*m),
            MapInput::Point(p) => *p,
        }
    }
}

pub fn complex_from_json(v: &Value) -> Result<Complex64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Error::Parse(format!(
                "complex number must be [re, im], got {v}"
            ))),
        },
        _ => Err(Error::Parse(format!(
            "complex number must be [re, im], got {v}"
        ))),
    }
}

pub fn complex_to_json(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

/// Parses the map format: `{"matrix": [[re,im] x 4]}` for `(a, b, c, d)` or
/// a preset (`rotation`, `dilation`, `remark_eta1`, `remark_eta2`, and the
/// point maps `identity`, `radial_square`, `cayley`).
pub fn map_from_json(v: &Value) -> Result<MapInput> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("map must be a JSON object".into()))?;
    if let Some(m) = obj.get("matrix") {
        let entries = m
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse("matrix must hold four [re, im] entries".into()))?;
        let z: Vec<Complex64> = entries
            .iter()
            .map(complex_from_json)
            .collect::<Result<_>>()?;
        return Ok(MapInput::Mobius(MobiusMap::new(z[0], z[1], z[2], z[3])?));
    }
    let preset = obj
        .get("preset")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("map needs \"matrix\" or \"preset\"".into()))?;
    let param = |key: &str| {
        obj.get(key)
            .ok_or_else(|| Error::Parse(format!("preset {preset} needs \"{key}\"")))
            .and_then(complex_from_json)
    };
    Ok(match preset {
        "rotation" => {
            let c = param("c")?;
            if (c.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Parse(format!(
                    "rotation needs |c| = 1, got {}",
                    c.norm()
                )));
            }
            MapInput::Mobius(MobiusMap::rotation(c)?)
        }
        "dilation" => MapInput::Mobius(MobiusMap::dilation(param("lambda")?)?),
        "remark_eta1" => MapInput::Mobius(real_translation(0.5)),
        "remark_eta2" => MapInput::Mobius(real_translation(0.25)),
        "identity" => MapInput::Point(PointMap::Identity),
        "radial_square" => MapInput::Point(PointMap::RadialSquare),
        "cayley" => MapInput::Point(PointMap::Cayley),
        other => return Err(Error::Parse(format!("unknown map preset {other:?}"))),
    })
}

pub fn map_to_json(m: &MobiusMap) -> Value {
    Value::Array(m.coefficients().into_iter().map(complex_to_json).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rot(theta: f64) -> MobiusMap {
        MobiusMap::rotation(Complex64::from_polar(1.0, theta)).unwrap()
    }

    #[test]
    fn conjugacy_examples() {
        let r = rot(0.7);
        let w = analytically_conjugate(&r, &r).unwrap().unwrap();
        assert!(w.gamma.is_identity(1e-12));

        let half = MobiusMap::dilation(c(0.5, 0.0)).unwrap();
        let quarter = MobiusMap::dilation(c(0.25, 0.0)).unwrap();
        assert!(analytically_conjugate(&half, &quarter).unwrap().is_none());
        assert!(
            analytically_conjugate(&real_translation(0.5), &real_translation(0.25))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn conjugated_copies_are_recognized() {
        let g = MobiusMap::disk_automorphism(c(0.4, -0.3), 1.3).unwrap();
        let maps = [
            rot(2.2),
            MobiusMap::fixing_origin(c(0.2, 0.3), c(0.3, 0.4)).unwrap(),
            real_translation(0.6),
            MobiusMap::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)).unwrap(),
        ];
        for m in maps {
            let m2 = g.compose(&m).compose(&g.inverse());
            let w = analytically_conjugate(&m, &m2).unwrap().expect("conjugate");
            assert!(w.deviation <= WITNESS_TOL);
            assert!(w.gamma.is_disk_automorphism());
        }
    }

    #[test]
    fn verdict_examples() {
        let u = Complex64::from_polar(1.0, 1.1);
        let r = MobiusMap::rotation(u).unwrap();
        let rbar = MobiusMap::rotation(u.conj()).unwrap();
        assert_eq!(
            semicrossed_iso_verdict(&r, &rbar).unwrap().verdict,
            IsoVerdict::InverseConjugate
        );
        assert_eq!(
            semicrossed_iso_verdict(&r, &r).unwrap().verdict,
            IsoVerdict::Conjugate
        );

        let half = MobiusMap::dilation(c(0.5, 0.0)).unwrap();
        let quarter = MobiusMap::dilation(c(0.25, 0.0)).unwrap();
        assert_eq!(
            semicrossed_iso_verdict(&half, &quarter).unwrap().verdict,
            IsoVerdict::NotIsomorphic
        );
        // the inverse branch is reserved for elliptic automorphisms
        let h = real_translation(0.5);
        assert_eq!(
            semicrossed_iso_verdict(&h, &h.inverse()).unwrap().verdict,
            IsoVerdict::Conjugate
        );
    }

    #[test]
    fn map_json_formats() {
        let m =
            map_from_json(&json!({"matrix": [[1.0, 0.0], [-0.5, 0.0], [-0.5, 0.0], [1.0, 0.0]]}))
                .unwrap();
        assert!(m.mobius().unwrap().approx_eq(&real_translation(0.5), 1e-15));
        let r = map_from_json(&json!({"preset": "rotation", "c": [0.0, 1.0]})).unwrap();
        assert!(r
            .mobius()
            .unwrap()
            .approx_eq(&rot(std::f64::consts::FRAC_PI_2), 1e-15));
        assert!(map_from_json(&json!({"preset": "rotation", "c": [0.5, 0.0]})).is_err());
        assert!(map_from_json(&json!({"preset": "dilation", "lambda": [0.5, 0.0]})).is_ok());
        assert!(map_from_json(&json!({"preset": "remark_eta2"})).is_ok());
        assert!(map_from_json(&json!({"preset": "nope"})).is_err());
        assert!(map_from_json(&json!({"matrix": [[1.0, 0.0]]})).is_err());
        let p = map_from_json(&json!({"preset": "radial_square"})).unwrap();
        assert!(matches!(p.mobius(), Err(Error::NotDecidable(_))));
    }
}
