//! The skew polynomial algebra `P(X, eta)` of a finite system.
//!
//! Elements are finite sums `sum_k f_k U^k` with coefficient functions
//! `f_k : X -> C`, multiplied under the covariance relation
//! `U f = (f . eta) U`. Since `X` is finite, coefficients are dense complex
//! vectors indexed by point.

pub mod oracle;

use std::ops::{Add, Index, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::dynsys::{ConjugacyWitness, FiniteDynSys};
use crate::error::{Error, Result};

/// Default tolerance for approximate comparisons of complex quantities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A coefficient function `f : X -> C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefFn(Vec<Complex64>);

impl CoefFn {
    pub fn new(values: Vec<Complex64>) -> Self {
        CoefFn(values)
    }

    pub fn zeros(n: usize) -> Self {
        CoefFn(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        CoefFn(vec![c; n])
    }

    pub fn from_real(values: &[f64]) -> Self {
        CoefFn(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    /// Sup norm `max_x |f(x)|`.
    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `f . table`, where `table` is the value table of a self-map.
    pub fn compose(&self, table: &[usize]) -> CoefFn {
        CoefFn(table.iter().map(|&j| self.0[j]).collect())
    }

    pub fn pointwise_mul(&self, other: &CoefFn) -> CoefFn {
        CoefFn(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    pub fn scale(&self, c: Complex64) -> CoefFn {
        CoefFn(self.0.iter().map(|v| v * c).collect())
    }

    fn add_assign(&mut self, other: &CoefFn) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn max_abs_diff(&self, other: &CoefFn) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for CoefFn {
    type Output = Complex64;

    fn index(&self, x: usize) -> &Complex64 {
        &self.0[x]
    }
}

/// `sum_k f_k U^k` over a fixed finite system.
///
/// Always trailing-normalized: the top coefficient is nonzero, and the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone)]
pub struct SkewPoly {
    system: Arc<FiniteDynSys>,
    coeffs: Vec<CoefFn>,
}

impl PartialEq for SkewPoly {
    fn eq(&self, other: &Self) -> bool {
        same_system(&self.system, &other.system) && self.coeffs == other.coeffs
    }
}

fn same_system(a: &Arc<FiniteDynSys>, b: &Arc<FiniteDynSys>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl SkewPoly {
    pub fn new(system: Arc<FiniteDynSys>, coeffs: Vec<CoefFn>) -> Result<Self> {
        let n = system.size();
        if let Some(c) = coeffs.iter().find(|c| c.len() != n) {
            return Err(Error::CoefficientLength {
                expected: n,
                got: c.len(),
            });
        }
        Ok(Self::normalized(system, coeffs))
    }

    fn normalized(system: Arc<FiniteDynSys>, mut coeffs: Vec<CoefFn>) -> Self {
        while coeffs.last().is_some_and(CoefFn::is_zero) {
            coeffs.pop();
        }
        SkewPoly { system, coeffs }
    }

    pub fn zero(system: Arc<FiniteDynSys>) -> Self {
        SkewPoly {
            system,
            coeffs: Vec::new(),
        }
    }

    /// The unit, the constant function 1.
    pub fn one(system: Arc<FiniteDynSys>) -> Self {
        let n = system.size();
        Self::normalized(system, vec![CoefFn::constant(n, Complex64::new(1.0, 0.0))])
    }

    /// The generator `U` (degree 1, coefficient 1).
    pub fn shift(system: Arc<FiniteDynSys>) -> Self {
        Self::monomial(
            system.clone(),
            CoefFn::constant(system.size(), Complex64::new(1.0, 0.0)),
            1,
        )
        .expect("constant coefficient has the system's length")
    }

    /// `f U^k`.
    pub fn monomial(system: Arc<FiniteDynSys>, f: CoefFn, k: usize) -> Result<Self> {
        let n = system.size();
        let mut coeffs = vec![CoefFn::zeros(n); k];
        coeffs.push(f);
        Self::new(system, coeffs)
    }

    pub fn constant(system: Arc<FiniteDynSys>, f: CoefFn) -> Result<Self> {
        Self::monomial(system, f, 0)
    }

    pub fn system(&self) -> &Arc<FiniteDynSys> {
        &self.system
    }

    pub fn coeffs(&self) -> &[CoefFn] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `E_n(p)`, the coefficient of `U^n`; zero beyond the degree.
    pub fn coefficient(&self, n: usize) -> CoefFn {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(|| CoefFn::zeros(self.system.size()))
    }

    fn check_same(&self, other: &SkewPoly) -> Result<()> {
        if same_system(&self.system, &other.system) {
            Ok(())
        } else {
            Err(Error::SystemMismatch {
                left: self.system.size(),
                right: other.system.size(),
            })
        }
    }

    pub fn try_add(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.check_same(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let n = self.system.size();
        let coeffs = (0..len)
            .map(|k| {
                let mut c = self
                    .coeffs
                    .get(k)
                    .cloned()
                    .unwrap_or_else(|| CoefFn::zeros(n));
                if let Some(o) = other.coeffs.get(k) {
                    c.add_assign(o);
                }
                c
            })
            .collect();
        Ok(Self::normalized(self.system.clone(), coeffs))
    }

    pub fn scale(&self, c: Complex64) -> SkewPoly {
        let coeffs = self.coeffs.iter().map(|f| f.scale(c)).collect();
        Self::normalized(self.system.clone(), coeffs)
    }

    /// Product under `U f = (f . eta) U`: the coefficient of `U^n` in `pq` is
    /// `sum_{k=0}^{n} f_k (g_{n-k} . eta^(k))`.
    pub fn try_mul(&self, other: &SkewPoly) -> Result<SkewPoly> {
        self.check_same(other)?;
        let n = self.system.size();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.system.clone()));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![CoefFn::zeros(n); len];
        let mut power: Vec<usize> = (0..n).collect();
        for (k, f) in self.coeffs.iter().enumerate() {
            // power == eta^(k)
            for (j, g) in other.coeffs.iter().enumerate() {
                let term = f.pointwise_mul(&g.compose(&power));
                out[k + j].add_assign(&term);
            }
            for v in power.iter_mut() {
                *v = self.system.apply(*v);
            }
        }
        Ok(Self::normalized(self.system.clone(), out))
    }

    /// `sum_k max_x |f_k(x)|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(CoefFn::sup_norm).sum()
    }

    /// Carries `p` along a conjugacy `sigma` onto `target`: every coefficient
    /// `f_k` becomes `f_k . sigma^-1`.
    pub fn transport(&self, w: &ConjugacyWitness, target: Arc<FiniteDynSys>) -> Result<SkewPoly> {
        w.check(&self.system, &target)?;
        let inv = w.inverse_table();
        let coeffs = self.coeffs.iter().map(|f| f.compose(&inv)).collect();
        Ok(Self::normalized(target, coeffs))
    }

    /// Largest coefficient deviation; infinite for different systems.
    pub fn max_abs_diff(&self, other: &SkewPoly) -> f64 {
        if !same_system(&self.system, &other.system) {
            return f64::INFINITY;
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| self.coefficient(k).max_abs_diff(&other.coefficient(k)))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &SkewPoly, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }
}

impl Add for &SkewPoly {
    type Output = SkewPoly;

    /// Panics on a system mismatch; use [`SkewPoly::try_add`] otherwise.
    fn add(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_add(rhs)
            .expect("skew polynomials over different systems")
    }
}

impl Sub for &SkewPoly {
    type Output = SkewPoly;

    fn sub(self, rhs: &SkewPoly) -> SkewPoly {
        self + &(-rhs)
    }
}

impl Neg for &SkewPoly {
    type Output = SkewPoly;

    fn neg(self) -> SkewPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &SkewPoly {
    type Output = SkewPoly;

    /// Panics on a system mismatch; use [`SkewPoly::try_mul`] otherwise.
    fn mul(self, rhs: &SkewPoly) -> SkewPoly {
        self.try_mul(rhs)
            .expect("skew polynomials over different systems")
    }
}
