//! Truncated shift models on `l^2`.
//!
//! Both conventions use the diagonal action
//! `pi_x(f) = diag(f(x), f(eta(x)), f(eta^(2)(x)), ..)`.
//! *Backward*: `U -> V_x`, the backward shift; `f U^k -> pi_x(f) V_x^k`.
//! *Forward*: generators `U_x pi_x(g)` with the forward shift `U_x`; this
//! realizes the opposite algebra, so `p -> rep(p)` is an anti-homomorphism
//! and `Forward(p)` is the transpose of `Backward(p)`.
//!
//! Truncating to the first `N` coordinates keeps both models exactly
//! (anti-)multiplicative: upper-triangular matrices compress
//! multiplicatively onto leading coordinates, and likewise lower-triangular
//! ones.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynsys::FiniteDynSys;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::skewpoly::{CoefFn, SkewPoly};

pub type CMatrix = DMatrix<Complex64>;

/// Default truncation for norm estimates.
pub const DEFAULT_TRUNC: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Backward,
    Forward,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backward" => Ok(Convention::Backward),
            "forward" => Ok(Convention::Forward),
            other => Err(Error::Parse(format!("unknown convention {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedRep {
    system: Arc<FiniteDynSys>,
    base_point: usize,
    trunc: usize,
    convention: Convention,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepMatrix {
    pub matrix: CMatrix,
    /// Set when the polynomial's degree reaches the truncation, so the image
    /// sees only part of the polynomial.
    pub edge_warning: bool,
}

impl TruncatedRep {
    pub fn new(
        system: Arc<FiniteDynSys>,
        base_point: usize,
        trunc: usize,
        convention: Convention,
    ) -> Result<Self> {
        system.check_point(base_point)?;
        if trunc == 0 {
            return Err(Error::InvalidTruncation);
        }
        Ok(TruncatedRep {
            system,
            base_point,
            trunc,
            convention,
        })
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// `x, eta(x), .., eta^(N-1)(x)`.
    pub fn orbit(&self) -> Vec<usize> {
        std::iter::successors(Some(self.base_point), |&y| Some(self.system.apply(y)))
            .take(self.trunc)
            .collect()
    }

    pub fn rep_matrix(&self, p: &SkewPoly) -> Result<RepMatrix> {
        if **p.system() != *self.system {
            return Err(Error::SystemMismatch {
                left: p.system().size(),
                right: self.system.size(),
            });
        }
        let orbit = self.orbit();
        let matrix = assemble(self.trunc, p.coeffs().len(), self.convention, |k, j| {
            p.coeffs()[k][orbit[j]]
        });
        Ok(RepMatrix {
            matrix,
            edge_warning: p.degree().is_some_and(|d| d >= self.trunc),
        })
    }
}

/// Builds the truncated image of `sum_k f_k U^k` from `value(k, j) =
/// f_k(eta^(j)(x))`. Backward: entry `(j, j + k)` is `value(k, j)`.
pub(crate) fn assemble<F>(trunc: usize, terms: usize, convention: Convention, value: F) -> CMatrix
where
    F: Fn(usize, usize) -> Complex64,
{
    let mut m = CMatrix::zeros(trunc, trunc);
    for k in 0..terms.min(trunc) {
        for j in 0..trunc - k {
            let v = value(k, j);
            match convention {
                Convention::Backward => m[(j, j + k)] = v,
                Convention::Forward => m[(j + k, j)] = v,
            }
        }
    }
    m
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Max over the sampled base points of the operator norm of the truncated
/// image. A lower bound for the norm in the shift model; nondecreasing in
/// `trunc` and in the sample set.
pub fn norm_estimate(
    p: &SkewPoly,
    trunc: usize,
    points: &[usize],
    convention: Convention,
    exec: Execution,
) -> Result<f64> {
    for &x in points {
        p.system().check_point(x)?;
    }
    if trunc == 0 {
        return Err(Error::InvalidTruncation);
    }
    let sys = p.system().clone();
    Ok(exec.max_over(points, |&x| {
        let rep = TruncatedRep::new(sys.clone(), x, trunc, convention).expect("validated above");
        operator_norm(&rep.rep_matrix(p).expect("same system").matrix)
    }))
}

/// `||rep((wU)^n)||` for `n = 1..=n_max` at base point `x`, where `w` is the
/// shift weight (the constant function 1 for the unit shift).
pub fn shift_power_norms(
    sys: &Arc<FiniteDynSys>,
    weight: &CoefFn,
    x: usize,
    trunc: usize,
    n_max: usize,
) -> Result<Vec<f64>> {
    let rep = TruncatedRep::new(sys.clone(), x, trunc, Convention::Backward)?;
    let step = SkewPoly::monomial(sys.clone(), weight.clone(), 1)?;
    let mut power = SkewPoly::one(sys.clone());
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        power = &power * &step;
        out.push(operator_norm(&rep.rep_matrix(&power)?.matrix));
    }
    Ok(out)
}

/// `max_{1 <= n <= trunc} ||rep((wU)^n)||^{1/n}` over the sampled base points,
/// an estimate of the spectral radius of the weighted shift.
pub fn spectral_radius_estimate(
    sys: &Arc<FiniteDynSys>,
    weight: &CoefFn,
    points: &[usize],
    trunc: usize,
    exec: Execution,
) -> Result<f64> {
    for &x in points {
        sys.check_point(x)?;
    }
    let per_point = exec.map_slice(points, |&x| -> Result<f64> {
        let norms = shift_power_norms(sys, weight, x, trunc, trunc)?;
        Ok(norms
            .iter()
            .enumerate()
            .map(|(i, v)| v.powf(1.0 / (i + 1) as f64))
            .fold(0.0, f64::max))
    });
    per_point
        .into_iter()
        .try_fold(0.0, |acc, r| r.map(|v| f64::max(acc, v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sys(map: &[usize]) -> Arc<FiniteDynSys> {
        Arc::new(FiniteDynSys::new(map.to_vec()).unwrap())
    }

    #[test]
    fn unit_and_shift_images() {
        let s = sys(&[1, 2, 0]);
        let rep = TruncatedRep::new(s.clone(), 0, 3, Convention::Backward).unwrap();
        let one = rep.rep_matrix(&SkewPoly::one(s.clone())).unwrap();
        assert_eq!(one.matrix, CMatrix::identity(3, 3));
        let u = rep.rep_matrix(&SkewPoly::shift(s.clone())).unwrap().matrix;
        let mut expected = CMatrix::zeros(3, 3);
        expected[(0, 1)] = c(1.0, 0.0);
        expected[(1, 2)] = c(1.0, 0.0);
        assert_eq!(u, expected);
    }

    #[test]
    fn diagonal_follows_orbit() {
        let s = sys(&[1, 2, 0, 0]);
        let f = CoefFn::from_real(&[10.0, 20.0, 30.0, 40.0]);
        let rep = TruncatedRep::new(s.clone(), 3, 5, Convention::Backward).unwrap();
        let m = rep
            .rep_matrix(&SkewPoly::constant(s, f).unwrap())
            .unwrap()
            .matrix;
        let diag: Vec<f64> = (0..5).map(|i| m[(i, i)].re).collect();
        assert_eq!(diag, vec![40.0, 10.0, 20.0, 30.0, 10.0]);
    }

    #[test]
    fn covariance_exact_in_both_conventions() {
        let s = sys(&[2, 0, 1, 1]);
        let f = CoefFn::new(vec![c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(-2.0, 1.0)]);
        let u = SkewPoly::shift(s.clone());
        let fp = SkewPoly::constant(s.clone(), f.clone()).unwrap();
        let fe = SkewPoly::constant(s.clone(), f.compose(s.map())).unwrap();
        for conv in [Convention::Backward, Convention::Forward] {
            for n in [1, 2, 5, 9] {
                for x in 0..4 {
                    let rep = TruncatedRep::new(s.clone(), x, n, conv).unwrap();
                    let m = |p: &SkewPoly| rep.rep_matrix(p).unwrap().matrix;
                    match conv {
                        Convention::Backward => assert_eq!(&m(&u) * &m(&fp), &m(&fe) * &m(&u)),
                        // opposite algebra: products reverse
                        Convention::Forward => assert_eq!(&m(&fp) * &m(&u), &m(&u) * &m(&fe)),
                    }
                }
            }
        }
    }

    #[test]
    fn edge_warning_flag() {
        let s = sys(&[0]);
        let rep = TruncatedRep::new(s.clone(), 0, 2, Convention::Backward).unwrap();
        let u2 = &SkewPoly::shift(s.clone()) * &SkewPoly::shift(s.clone());
        assert!(rep.rep_matrix(&u2).unwrap().edge_warning);
        assert!(!rep.rep_matrix(&SkewPoly::shift(s)).unwrap().edge_warning);
    }

    #[test]
    fn norm_examples() {
        let s = sys(&[1, 0]);
        let f = CoefFn::new(vec![c(3.0, 0.0), c(0.0, -4.0)]);
        let p = SkewPoly::constant(s.clone(), f).unwrap();
        let est =
            norm_estimate(&p, 8, &[0, 1], Convention::Backward, Execution::Sequential).unwrap();
        assert!((est - 4.0).abs() < 1e-12);
        let z = SkewPoly::zero(s.clone());
        assert_eq!(
            norm_estimate(&z, 8, &[0, 1], Convention::Backward, Execution::Sequential).unwrap(),
            0.0
        );
        let fu = SkewPoly::monomial(s.clone(), CoefFn::from_real(&[1.0, 1.0]), 1).unwrap();
        let est =
            norm_estimate(&fu, 8, &[0, 1], Convention::Backward, Execution::Parallel).unwrap();
        assert!((est - 1.0).abs() < 1e-12);
        assert!(norm_estimate(&fu, 0, &[0], Convention::Backward, Execution::Sequential).is_err());
        assert!(norm_estimate(&fu, 4, &[5], Convention::Backward, Execution::Sequential).is_err());
    }

    #[test]
    fn spectral_radius_of_shifts() {
        let s = sys(&[1, 2, 0]);
        let unit = CoefFn::constant(3, c(1.0, 0.0));
        let norms = shift_power_norms(&s, &unit, 0, 17, 16).unwrap();
        assert!(norms.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let r = spectral_radius_estimate(&s, &unit, &[0, 1, 2], 16, Execution::Sequential).unwrap();
        assert!((r - 1.0).abs() < 1e-12);

        let w = c(0.3, 0.4);
        let r =
            spectral_radius_estimate(&s, &CoefFn::constant(3, w), &[0], 16, Execution::Parallel)
                .unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }
}
