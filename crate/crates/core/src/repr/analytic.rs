//! Skew polynomials with analytic coefficients over a Möbius disk map, and
//! the nest representations attached to an interior fixed point.
//!
//! Coefficients are holomorphic functions evaluated on 1-jets
//! `(value, derivative)`, so `f(x)` and `f'(x)` come out exactly (no finite
//! differences) even for compositions `g . eta^(k)` built by products.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_complex::Complex64;

use super::nest::Mat2;
use super::truncated::{assemble, operator_norm, CMatrix, Convention};
use crate::diskmaps::MobiusMap;
use crate::error::{Error, Result};
use crate::par::Execution;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// First-order jet of a holomorphic function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub deriv: Complex64,
}

impl Jet {
    /// The jet of the coordinate function at `z`.
    pub fn variable(z: Complex64) -> Self {
        Jet {
            value: z,
            deriv: ONE,
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Jet {
            value: c,
            deriv: ZERO,
        }
    }
}

impl Add for Jet {
    type Output = Jet;

    fn add(self, o: Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            deriv: self.deriv + o.deriv,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;

    fn mul(self, o: Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            deriv: self.deriv * o.value + self.value * o.deriv,
        }
    }
}

/// A holomorphic coefficient function on the disk.
#[derive(Clone)]
pub struct HolFn(Arc<dyn Fn(Jet) -> Jet + Send + Sync>);

impl fmt::Debug for HolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("HolFn(..)")
    }
}

impl HolFn {
    pub fn new<F: Fn(Jet) -> Jet + Send + Sync + 'static>(f: F) -> Self {
        HolFn(Arc::new(f))
    }

    pub fn constant(c: Complex64) -> Self {
        HolFn::new(move |_| Jet::constant(c))
    }

    /// The coordinate function `z`.
    pub fn coordinate() -> Self {
        HolFn::new(|j| j)
    }

    /// `sum_i coeffs[i] z^i`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        HolFn::new(move |j| {
            coeffs
                .iter()
                .rev()
                .fold(Jet::constant(ZERO), |acc, &c| acc * j + Jet::constant(c))
        })
    }

    pub fn jet(&self, j: Jet) -> Jet {
        (self.0)(j)
    }

    pub fn at(&self, z: Complex64) -> Complex64 {
        self.jet(Jet::variable(z)).value
    }

    /// `(f(z), f'(z))`.
    pub fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let j = self.jet(Jet::variable(z));
        (j.value, j.deriv)
    }

    pub fn mul(&self, other: &HolFn) -> HolFn {
        let (f, g) = (self.clone(), other.clone());
        HolFn::new(move |j| f.jet(j) * g.jet(j))
    }

    pub fn add(&self, other: &HolFn) -> HolFn {
        let (f, g) = (self.clone(), other.clone());
        HolFn::new(move |j| f.jet(j) + g.jet(j))
    }

    /// `f . m`; poles propagate as non-finite values.
    pub fn compose(&self, m: &MobiusMap) -> HolFn {
        let (f, m) = (self.clone(), *m);
        HolFn::new(move |j| {
            let nan = Complex64::new(f64::NAN, f64::NAN);
            let v = m.apply(j.value).unwrap_or(nan);
            let d = m.derivative(j.value).unwrap_or(nan);
            f.jet(Jet {
                value: v,
                deriv: d * j.deriv,
            })
        })
    }
}

/// `sum_k f_k U^k` with holomorphic coefficients and `U f = (f . eta) U`.
#[derive(Debug, Clone)]
pub struct DiskSkewPoly {
    map: MobiusMap,
    coeffs: Vec<HolFn>,
}

impl DiskSkewPoly {
    pub fn new(map: MobiusMap, coeffs: Vec<HolFn>) -> Self {
        DiskSkewPoly { map, coeffs }
    }

    pub fn shift(map: MobiusMap) -> Self {
        DiskSkewPoly {
            map,
            coeffs: vec![HolFn::constant(ZERO), HolFn::constant(ONE)],
        }
    }

    pub fn constant(map: MobiusMap, f: HolFn) -> Self {
        DiskSkewPoly {
            map,
            coeffs: vec![f],
        }
    }

    pub fn map(&self) -> &MobiusMap {
        &self.map
    }

    pub fn coeffs(&self) -> &[HolFn] {
        &self.coeffs
    }

    fn check_same(&self, other: &DiskSkewPoly) -> Result<()> {
        if self.map.approx_eq(&other.map, 0.0) {
            Ok(())
        } else {
            Err(Error::SystemMismatch { left: 0, right: 0 })
        }
    }

    pub fn try_add(&self, other: &DiskSkewPoly) -> Result<DiskSkewPoly> {
        self.check_same(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(f), Some(g)) => f.add(g),
                (Some(f), None) | (None, Some(f)) => f.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(DiskSkewPoly {
            map: self.map,
            coeffs,
        })
    }

    /// Coefficient of `U^n` in `pq` is `sum_k f_k (g_{n-k} . eta^(k))`.
    pub fn try_mul(&self, other: &DiskSkewPoly) -> Result<DiskSkewPoly> {
        self.check_same(other)?;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(DiskSkewPoly {
                map: self.map,
                coeffs: Vec::new(),
            });
        }
        let mut out: Vec<Option<HolFn>> = vec![None; self.coeffs.len() + other.coeffs.len() - 1];
        for (k, f) in self.coeffs.iter().enumerate() {
            let eta_k = self.map.power(k);
            for (j, g) in other.coeffs.iter().enumerate() {
                let term = f.mul(&g.compose(&eta_k));
                out[k + j] = Some(match out[k + j].take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                });
            }
        }
        Ok(DiskSkewPoly {
            map: self.map,
            coeffs: out
                .into_iter()
                .map(|c| c.expect("every degree receives a term"))
                .collect(),
        })
    }
}

/// A character of the disk model: `p -> sum_k f_k(x) z^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskCharacter {
    pub point: Complex64,
    pub disc_param: Complex64,
}

impl DiskCharacter {
    pub fn eval(&self, p: &DiskSkewPoly) -> Complex64 {
        p.coeffs()
            .iter()
            .rev()
            .fold(ZERO, |acc, f| acc * self.disc_param + f.at(self.point))
    }
}

/// Nest representation at an interior fixed point `x` of an analytic map:
/// `pi(f) = [[f(x), a f'(x)], [0, f(x)]]`, `pi(U) = [[eta'(x) z, 0], [0, z]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedDerivativeRep {
    map: MobiusMap,
    x: Complex64,
    z: Complex64,
    a: Complex64,
    multiplier: Complex64,
}

/// Fixed-point tolerance for `build_fixed_derivative`.
const FIXED_TOL: f64 = 1e-9;

pub fn build_fixed_derivative(
    map: &MobiusMap,
    x: Complex64,
    z: Complex64,
    a: Complex64,
    r: f64,
) -> Result<FixedDerivativeRep> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(r));
    }
    if x.norm() >= 1.0 || (map.apply(x)? - x).norm() > FIXED_TOL {
        return Err(Error::NotInteriorFixed(x));
    }
    if a == ZERO {
        return Err(Error::ZeroScale);
    }
    if z.norm() >= r {
        return Err(Error::OnBoundary {
            modulus: z.norm(),
            radius: r,
        });
    }
    Ok(FixedDerivativeRep {
        map: *map,
        x,
        z,
        a,
        multiplier: map.derivative(x)?,
    })
}

impl FixedDerivativeRep {
    pub fn point(&self) -> Complex64 {
        self.x
    }

    pub fn multiplier(&self) -> Complex64 {
        self.multiplier
    }

    pub fn coefficient_image(&self, f: &HolFn) -> Mat2 {
        let (v, d) = f.value_and_derivative(self.x);
        Mat2::new(v, self.a * d, ZERO, v)
    }

    pub fn shift_image(&self) -> Mat2 {
        Mat2::new(self.multiplier * self.z, ZERO, ZERO, self.z)
    }

    pub fn apply(&self, p: &DiskSkewPoly) -> Result<Mat2> {
        if !p.map().approx_eq(&self.map, 0.0) {
            return Err(Error::SystemMismatch { left: 0, right: 0 });
        }
        let u = self.shift_image();
        let mut u_pow = Mat2::identity();
        let mut acc = Mat2::zeros();
        for f in p.coeffs() {
            acc += self.coefficient_image(f) * u_pow;
            u_pow *= u;
        }
        Ok(acc)
    }

    /// Diagonal compressions: `(theta_{x, eta'(x) z}, theta_{x, z})`.
    pub fn extract_characters(&self) -> (DiskCharacter, DiskCharacter) {
        (
            DiskCharacter {
                point: self.x,
                disc_param: self.multiplier * self.z,
            },
            DiskCharacter {
                point: self.x,
                disc_param: self.z,
            },
        )
    }
}

/// Truncated shift-model image of a disk polynomial at base point `z0`:
/// diagonal entries follow the orbit `z0, eta(z0), ..`.
pub fn rep_matrix_disk(
    p: &DiskSkewPoly,
    z0: Complex64,
    trunc: usize,
    convention: Convention,
) -> Result<CMatrix> {
    if trunc == 0 {
        return Err(Error::InvalidTruncation);
    }
    let mut orbit = Vec::with_capacity(trunc);
    let mut w = z0;
    for _ in 0..trunc {
        orbit.push(w);
        w = p.map().apply(w)?;
    }
    Ok(assemble(trunc, p.coeffs().len(), convention, |k, j| {
        p.coeffs()[k].at(orbit[j])
    }))
}

/// 256 boundary points and 128 interior points (two rings).
pub fn disk_norm_grid() -> Vec<Complex64> {
    let mut grid: Vec<Complex64> = (0..256)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 256.0))
        .collect();
    for r in [1.0 / 3.0, 2.0 / 3.0] {
        grid.extend((0..64).map(|k| Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / 64.0)));
    }
    grid
}

pub fn norm_estimate_disk(
    p: &DiskSkewPoly,
    trunc: usize,
    samples: &[Complex64],
    convention: Convention,
    exec: Execution,
) -> Result<f64> {
    let norms = exec.map_slice(samples, |&z0| {
        rep_matrix_disk(p, z0, trunc, convention).map(|m| operator_norm(&m))
    });
    norms
        .into_iter()
        .try_fold(0.0, |acc, r| r.map(|v| f64::max(acc, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jets_are_exact() {
        let f = HolFn::polynomial(vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, 3.0)]);
        let z = c(0.2, -0.1);
        let (v, d) = f.value_and_derivative(z);
        assert!((v - (c(1.0, 0.0) + c(2.0, 1.0) * z + c(0.0, 3.0) * z * z)).norm() < 1e-15);
        assert!((d - (c(2.0, 1.0) + c(0.0, 6.0) * z)).norm() < 1e-15);

        let m = MobiusMap::fixing_origin(c(0.5, 0.1), c(0.2, 0.0)).unwrap();
        let g = f.compose(&m);
        let (_, dg) = g.value_and_derivative(z);
        let chain = (c(2.0, 1.0) + c(0.0, 6.0) * m.apply(z).unwrap()) * m.derivative(z).unwrap();
        assert!((dg - chain).norm() < 1e-14);
    }

    #[test]
    fn identity_function_image() {
        let m = MobiusMap::dilation(c(0.5, 0.0)).unwrap();
        let a = c(2.0, -1.0);
        let pi = build_fixed_derivative(&m, ZERO, c(0.3, 0.0), a, 1.0).unwrap();
        let id = DiskSkewPoly::constant(m, HolFn::coordinate());
        assert_eq!(pi.apply(&id).unwrap(), Mat2::new(ZERO, a, ZERO, ZERO));
    }

    #[test]
    fn shift_image_uses_multiplier() {
        let cc = Complex64::from_polar(0.8, 0.6);
        let m = MobiusMap::dilation(cc).unwrap();
        let z = c(0.1, 0.4);
        let pi = build_fixed_derivative(&m, ZERO, z, ONE, 1.0).unwrap();
        let u = pi.apply(&DiskSkewPoly::shift(m)).unwrap();
        assert!((u - Mat2::new(cc * z, ZERO, ZERO, z)).norm() < 1e-15);
        let (t1, t2) = pi.extract_characters();
        assert!((t1.disc_param / t2.disc_param - cc).norm() < 1e-15);
    }

    #[test]
    fn fixed_derivative_preconditions() {
        let m = MobiusMap::dilation(c(0.5, 0.0)).unwrap();
        assert!(matches!(
            build_fixed_derivative(&m, c(0.5, 0.0), ZERO, ONE, 1.0),
            Err(Error::NotInteriorFixed(_))
        ));
        assert_eq!(
            build_fixed_derivative(&m, ZERO, ZERO, ZERO, 1.0),
            Err(Error::ZeroScale)
        );
        assert!(matches!(
            build_fixed_derivative(&m, ZERO, c(1.0, 0.0), ONE, 1.0),
            Err(Error::OnBoundary { .. })
        ));
    }

    #[test]
    fn covariance_in_fixed_derivative_rep() {
        let m = MobiusMap::disk_automorphism(c(0.2, 0.3), 0.0)
            .unwrap()
            .inverse()
            .compose(&MobiusMap::fixing_origin(c(0.4, 0.3), c(0.2, -0.1)).unwrap())
            .compose(&MobiusMap::disk_automorphism(c(0.2, 0.3), 0.0).unwrap());
        let x = c(0.2, 0.3);
        let pi = build_fixed_derivative(&m, x, c(0.5, 0.2), c(1.5, 0.0), 1.0).unwrap();
        let f = HolFn::polynomial(vec![c(0.3, 0.0), c(1.0, 1.0), c(-2.0, 0.5)]);
        let u = DiskSkewPoly::shift(m);
        let lhs = u.try_mul(&DiskSkewPoly::constant(m, f.clone())).unwrap();
        let rhs = DiskSkewPoly::constant(m, f.compose(&m))
            .try_mul(&u)
            .unwrap();
        let diff = pi.apply(&lhs).unwrap() - pi.apply(&rhs).unwrap();
        assert!(diff.norm() < 1e-13);
    }

    #[test]
    fn disk_truncation_of_constant() {
        let m = MobiusMap::dilation(c(0.5, 0.0)).unwrap();
        let p = DiskSkewPoly::constant(m, HolFn::coordinate());
        let mat = rep_matrix_disk(&p, c(0.8, 0.0), 3, Convention::Backward).unwrap();
        assert!((mat[(2, 2)] - c(0.2, 0.0)).norm() < 1e-15);
        let est = norm_estimate_disk(
            &p,
            4,
            &disk_norm_grid(),
            Convention::Backward,
            Execution::Parallel,
        )
        .unwrap();
        assert!((est - 1.0).abs() < 1e-12);
        assert_eq!(disk_norm_grid().len(), 384);
    }
}
