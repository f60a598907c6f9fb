//! Characters `theta_{x,z}` of the conjugacy algebra of a finite system.
//!
//! `theta_{x,z}(p) = sum_n E_n(p)(x) z^n`. Off the fixed points only `z = 0`
//! gives a multiplicative functional; over each fixed point the characters
//! form an analytic disc of radius `r`, the spectral radius of `U`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynsys::{ConjugacyWitness, FiniteDynSys};
use crate::error::{Error, Result};
use crate::skewpoly::SkewPoly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Character {
    point: usize,
    disc_param: Complex64,
}

impl Character {
    /// `theta_{x,z}`; `z` must vanish unless `x` is fixed.
    pub fn new(sys: &FiniteDynSys, point: usize, disc_param: Complex64) -> Result<Self> {
        sys.check_point(point)?;
        if disc_param != Complex64::new(0.0, 0.0) && !sys.is_fixed(point) {
            return Err(Error::NotFixed { point });
        }
        Ok(Character { point, disc_param })
    }

    /// `theta_{x,0}`, point evaluation of the constant term.
    pub fn at_point(sys: &FiniteDynSys, point: usize) -> Result<Self> {
        Self::new(sys, point, Complex64::new(0.0, 0.0))
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn disc_param(&self) -> Complex64 {
        self.disc_param
    }

    /// Power-series evaluation of `p`, by Horner's rule in `z`.
    pub fn eval(&self, p: &SkewPoly) -> Result<Complex64> {
        let sys = p.system();
        sys.check_point(self.point)?;
        if self.disc_param != Complex64::new(0.0, 0.0) && !sys.is_fixed(self.point) {
            return Err(Error::NotFixed { point: self.point });
        }
        Ok(series_at(p, self.point, self.disc_param))
    }
}

/// `sum_n E_n(p)(x) z^n` without any fixed-point check.
pub(crate) fn series_at(p: &SkewPoly, x: usize, z: Complex64) -> Complex64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, f| acc * z + f[x])
}

pub fn eval_character(ch: &Character, p: &SkewPoly) -> Result<Complex64> {
    ch.eval(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CatalogEntry {
    /// A single character `theta_{x,0}`.
    Point,
    /// The analytic disc `{theta_{x,z} : |z| <= r}` over a fixed point.
    Disc { r: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterCatalog {
    entries: Vec<CatalogEntry>,
}

#[derive(Serialize, Deserialize)]
struct CatalogJson {
    points: Vec<PointJson>,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    x: usize,
    #[serde(flatten)]
    entry: CatalogEntry,
}

impl CharacterCatalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn discs(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, CatalogEntry::Disc { .. }))
            .map(|(x, _)| x)
    }

    /// `theta_{x,z}` if it lies in the catalog.
    pub fn character(&self, sys: &FiniteDynSys, x: usize, z: Complex64) -> Result<Character> {
        sys.check_point(x)?;
        match self.entries.get(x) {
            Some(CatalogEntry::Disc { r }) if z.norm() > *r => Err(Error::OnBoundary {
                modulus: z.norm(),
                radius: *r,
            }),
            Some(_) => Character::new(sys, x, z),
            None => Err(Error::PointOutOfRange(x)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let points = self
            .entries
            .iter()
            .enumerate()
            .map(|(x, &entry)| PointJson { x, entry })
            .collect();
        serde_json::to_value(CatalogJson { points }).expect("catalog serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let mut j: CatalogJson = serde_json::from_value(v.clone())?;
        j.points.sort_by_key(|p| p.x);
        if j.points.iter().enumerate().any(|(i, p)| p.x != i) {
            return Err(Error::Parse(
                "catalog points must cover 0..n exactly once".into(),
            ));
        }
        Ok(CharacterCatalog {
            entries: j.points.into_iter().map(|p| p.entry).collect(),
        })
    }
}

/// One disc of radius `r` per fixed point, a single point elsewhere.
pub fn build_catalog(sys: &FiniteDynSys, r: f64) -> Result<CharacterCatalog> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(r));
    }
    let entries = (0..sys.size())
        .map(|x| {
            if sys.is_fixed(x) {
                CatalogEntry::Disc { r }
            } else {
                CatalogEntry::Point
            }
        })
        .collect();
    Ok(CharacterCatalog { entries })
}

/// Whether `w` carries every disc of `a` onto a disc of `b` (same radius) and
/// every point onto a point.
pub fn catalog_equal(a: &CharacterCatalog, b: &CharacterCatalog, w: &ConjugacyWitness) -> bool {
    a.entries.len() == b.entries.len()
        && w.bijection().len() == a.entries.len()
        && a.entries
            .iter()
            .enumerate()
            .all(|(x, e)| b.entries.get(w.apply(x)) == Some(e))
}
