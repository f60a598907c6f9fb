//! Classification of Möbius self-maps of the closed disk and their normal
//! forms under conjugation by disk automorphisms.
//!
//! Every class comes with a *chart*: a Möbius map sending the disk onto a
//! model domain in which the map takes a canonical shape. Two maps in the
//! same class with equal normal-form parameters are conjugated by
//! `chart2^-1 . chart1`, which is then an automorphism of the disk.

use num_complex::Complex64;
use serde::Serialize;

use super::mobius::MobiusMap;
use crate::error::{Error, Result};

/// Tolerance for locating fixed points relative to the unit circle.
pub const LOCATION_TOL: f64 = 1e-9;
/// Tolerance for comparing normal-form parameters.
pub const INVARIANT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum DiskKind {
    Identity,
    EllipticAutomorphism,
    Parabolic,
    Hyperbolic,
    EllipticNonAutomorphism,
    #[serde(rename = "NonElliptic-NonAutomorphism")]
    NonEllipticNonAutomorphism,
}

impl DiskKind {
    pub fn is_elliptic(self) -> bool {
        matches!(
            self,
            DiskKind::EllipticAutomorphism | DiskKind::EllipticNonAutomorphism
        )
    }

    pub fn is_automorphism(self) -> bool {
        matches!(
            self,
            DiskKind::Identity
                | DiskKind::EllipticAutomorphism
                | DiskKind::Parabolic
                | DiskKind::Hyperbolic
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

impl Location {
    pub fn of(z: Complex64) -> Location {
        let r = z.norm();
        if (r - 1.0).abs() <= LOCATION_TOL {
            Location::Boundary
        } else if r < 1.0 {
            Location::Interior
        } else {
            Location::Exterior
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPoint {
    pub z: Complex64,
    pub location: Location,
    pub multiplier: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskClassification {
    pub kind: DiskKind,
    pub fixed_points: Vec<FixedPoint>,
    /// `eta'` at the distinguished fixed point: the interior one for elliptic
    /// maps, otherwise the attracting boundary one. 1 for the identity.
    pub multiplier: Complex64,
    /// Index into `fixed_points` of the distinguished point.
    pub distinguished: Option<usize>,
}

impl DiskClassification {
    pub fn distinguished_point(&self) -> Option<Complex64> {
        self.distinguished.map(|i| self.fixed_points[i].z)
    }
}

pub fn classify(m: &MobiusMap) -> Result<DiskClassification> {
    if !m.maps_disk_to_disk() {
        return Err(Error::NotDiskSelfMap(
            m.max_modulus_on_probe(crate::par::Execution::Sequential),
        ));
    }
    if m.is_identity(LOCATION_TOL) {
        return Ok(DiskClassification {
            kind: DiskKind::Identity,
            fixed_points: Vec::new(),
            multiplier: Complex64::new(1.0, 0.0),
            distinguished: None,
        });
    }
    let fixed_points: Vec<FixedPoint> = m
        .fixed_points(LOCATION_TOL)
        .into_iter()
        .map(|z| FixedPoint {
            z,
            location: Location::of(z),
            multiplier: m
                .derivative(z)
                .unwrap_or(Complex64::new(f64::INFINITY, 0.0)),
        })
        .collect();
    let automorphism = m.is_disk_automorphism();

    let interior = fixed_points
        .iter()
        .position(|p| p.location == Location::Interior);
    let boundary: Vec<usize> = (0..fixed_points.len())
        .filter(|&i| fixed_points[i].location == Location::Boundary)
        .collect();

    let (kind, distinguished) = if let Some(i) = interior {
        let kind = if automorphism {
            DiskKind::EllipticAutomorphism
        } else {
            DiskKind::EllipticNonAutomorphism
        };
        (kind, i)
    } else {
        // Brouwer: some fixed point lies on the boundary
        let attracting = boundary
            .iter()
            .copied()
            .min_by(|&i, &j| {
                fixed_points[i]
                    .multiplier
                    .norm()
                    .total_cmp(&fixed_points[j].multiplier.norm())
            })
            .ok_or_else(|| Error::NotDecidable("no fixed point in the closed disk".into()))?;
        let kind = match (automorphism, is_parabolic_like(m)) {
            (true, true) => DiskKind::Parabolic,
            (true, false) => DiskKind::Hyperbolic,
            (false, _) => DiskKind::NonEllipticNonAutomorphism,
        };
        (kind, attracting)
    };
    let multiplier = if kind == DiskKind::Parabolic {
        Complex64::new(1.0, 0.0)
    } else {
        fixed_points[distinguished].multiplier
    };
    Ok(DiskClassification {
        kind,
        fixed_points,
        multiplier,
        distinguished: Some(distinguished),
    })
}

/// Canonical representative of a conjugacy class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form")]
pub enum NormalForm {
    Identity,
    /// `z -> lambda z/(1 - kappa z)` on the disk, `kappa >= 0` real.
    Elliptic {
        lambda: Complex64,
        kappa_abs: f64,
    },
    /// `w -> ratio w` on the left half-plane, `0 < ratio < 1`.
    Hyperbolic {
        ratio: f64,
    },
    /// `w -> w + direction` on the left half-plane, `|direction| = 1`.
    /// For automorphisms `direction = +-i`.
    Parabolic {
        direction: Complex64,
    },
    /// `w -> ratio w` on the disk `|w + 1| < 1`.
    BoundaryContraction {
        ratio: f64,
    },
}

impl NormalForm {
    /// The sign of the translation for parabolic automorphisms.
    pub fn parabolic_sign(&self) -> Option<i8> {
        match self {
            NormalForm::Parabolic { direction } if direction.re.abs() <= INVARIANT_TOL => {
                Some(if direction.im > 0.0 { 1 } else { -1 })
            }
            _ => None,
        }
    }

    pub fn approx_eq(&self, other: &NormalForm, tol: f64) -> bool {
        use NormalForm::*;
        match (self, other) {
            (Identity, Identity) => true,
            (
                Elliptic {
                    lambda: l1,
                    kappa_abs: k1,
                },
                Elliptic {
                    lambda: l2,
                    kappa_abs: k2,
                },
            ) => (l1 - l2).norm() <= tol && (k1 - k2).abs() <= tol,
            (Hyperbolic { ratio: a }, Hyperbolic { ratio: b })
            | (BoundaryContraction { ratio: a }, BoundaryContraction { ratio: b }) => {
                (a - b).abs() <= tol
            }
            (Parabolic { direction: a }, Parabolic { direction: b }) => (a - b).norm() <= tol,
            _ => false,
        }
    }

    /// The model map as a Möbius transformation.
    pub fn model_map(&self) -> MobiusMap {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            NormalForm::Identity => Ok(MobiusMap::identity()),
            NormalForm::Elliptic { lambda, kappa_abs } => {
                MobiusMap::fixing_origin(lambda, Complex64::new(kappa_abs, 0.0))
            }
            NormalForm::Hyperbolic { ratio } | NormalForm::BoundaryContraction { ratio } => {
                MobiusMap::dilation(Complex64::new(ratio, 0.0))
            }
            NormalForm::Parabolic { direction } => MobiusMap::new(one, direction, zero, one),
        }
        .expect("normal forms are nonsingular")
    }
}

/// A normal form together with the chart realizing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub kind: DiskKind,
    pub form: NormalForm,
    /// `chart . m . chart^-1 = form.model_map()`.
    pub chart: MobiusMap,
}

/// A single (double) fixed point on the Riemann sphere: trace^2 = 4.
fn is_parabolic_like(m: &MobiusMap) -> bool {
    (m.trace() * m.trace() - 4.0).norm() <= LOCATION_TOL
}

pub fn normal_form(m: &MobiusMap) -> Result<Normalization> {
    let cls = classify(m)?;
    normal_form_of(m, &cls)
}

pub fn normal_form_of(m: &MobiusMap, cls: &DiskClassification) -> Result<Normalization> {
    let one = Complex64::new(1.0, 0.0);
    let conj_by = |chart: &MobiusMap| chart.compose(m).compose(&chart.inverse());
    let (form, chart) = match cls.kind {
        DiskKind::Identity => (NormalForm::Identity, MobiusMap::identity()),
        DiskKind::EllipticAutomorphism | DiskKind::EllipticNonAutomorphism => {
            let p = cls
                .distinguished_point()
                .expect("elliptic maps have a fixed point");
            let phi = MobiusMap::disk_automorphism(p, 0.0)?;
            // phi m phi^-1 fixes 0: z -> a z/(c z + d)
            let [a, _, c, d] = conj_by(&phi).coefficients();
            let lambda = a / d;
            let kappa = -c / d;
            let kappa_abs = kappa.norm();
            let chart = if kappa_abs > 1e-12 {
                // rotating by u sends kappa to kappa conj(u); pick u = kappa/|kappa|
                MobiusMap::rotation(kappa / kappa_abs)?.compose(&phi)
            } else {
                phi
            };
            (NormalForm::Elliptic { lambda, kappa_abs }, chart)
        }
        DiskKind::Parabolic => {
            let (chart, t) = parabolic_chart(m, cls)?;
            (NormalForm::Parabolic { direction: t }, chart)
        }
        DiskKind::Hyperbolic => {
            let p = cls
                .distinguished_point()
                .expect("hyperbolic maps have fixed points");
            let q = other_fixed_point(cls).expect("hyperbolic automorphisms fix two circle points");
            let base = MobiusMap::new(one, -p, one, -q)?;
            let chart = rotate_onto_left_half_plane(&base, p, q)?;
            let ratio = cls.multiplier.re;
            (NormalForm::Hyperbolic { ratio }, chart)
        }
        DiskKind::NonEllipticNonAutomorphism => {
            if is_parabolic_like(m) {
                let (chart, t) = parabolic_chart(m, cls)?;
                (NormalForm::Parabolic { direction: t }, chart)
            } else {
                let p = cls
                    .distinguished_point()
                    .expect("boundary fixed point exists");
                let zero = Complex64::new(0.0, 0.0);
                // send p to 0 and the repelling point q to infinity; symmetric
                // points go to symmetric points, so the reflection of q in the
                // unit circle lands on the center of the image disk
                let (base, reflected) = match other_fixed_point(cls) {
                    Some(q) => (MobiusMap::new(one, -p, one, -q)?, one / q.conj()),
                    None => (MobiusMap::new(one, -p, zero, one)?, zero),
                };
                let center = base.apply(reflected)?;
                let chart = base.scaled(-one / center);
                let ratio = cls.multiplier.re;
                (NormalForm::BoundaryContraction { ratio }, chart)
            }
        }
    };
    Ok(Normalization {
        kind: cls.kind,
        form,
        chart,
    })
}

/// The non-distinguished fixed point; `None` when it is at infinity.
fn other_fixed_point(cls: &DiskClassification) -> Option<Complex64> {
    let d = cls.distinguished?;
    cls.fixed_points
        .iter()
        .enumerate()
        .find(|(i, _)| *i != d)
        .map(|(_, f)| f.z)
}

/// `w = (z + p)/(z - p)` maps the disk onto the left half-plane and the fixed
/// point `p` to infinity; the map becomes `w -> w + t`, rescaled to `|t| = 1`.
fn parabolic_chart(m: &MobiusMap, cls: &DiskClassification) -> Result<(MobiusMap, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let p = cls
        .distinguished_point()
        .expect("parabolic maps have a fixed point");
    let p = p / p.norm();
    let base = MobiusMap::new(one, p, one, -p)?;
    let [_, b, _, d] = base.compose(m).compose(&base.inverse()).coefficients();
    let t = b / d;
    let s = t.norm();
    if s == 0.0 {
        return Err(Error::NotDecidable(
            "degenerate parabolic translation".into(),
        ));
    }
    Ok((base.scaled(Complex64::new(1.0 / s, 0.0)), t / s))
}

/// Post-composes `base` (which sends the boundary fixed points `p, q` to
/// `0, infinity`) with a rotation so the disk lands on `Re w < 0`.
fn rotate_onto_left_half_plane(base: &MobiusMap, p: Complex64, q: Complex64) -> Result<MobiusMap> {
    let i = Complex64::new(0.0, 1.0);
    let r = [p * i, -p * i, -p]
        .into_iter()
        .find(|r| (r - q).norm() > 0.1)
        .expect("one of three circle points is away from q");
    let v = base.apply(r)?;
    let mut omega = i * v.conj() / v.norm();
    let u = base.apply(Complex64::new(0.0, 0.0))?;
    if (omega * u).re > 0.0 {
        omega = -omega;
    }
    Ok(base.scaled(omega))
}
