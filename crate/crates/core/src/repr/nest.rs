//! Nest representations onto 2x2 upper-triangular matrices.

use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::charspace::{series_at, Character};
use crate::dynsys::FiniteDynSys;
use crate::error::{Error, Result};
use crate::skewpoly::SkewPoly;

pub type Mat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A nest representation of the skew polynomial algebra of a finite system.
#[derive(Debug, Clone, PartialEq)]
pub enum NestRep {
    /// `rho(f) = diag(f(x), f(eta(x)))`, `rho(fU)` has corner `f(x)`,
    /// `rho(f U^n) = 0` for `n >= 2`; requires `eta(x) != x`.
    OffFixed { system: Arc<FiniteDynSys>, x: usize },
    /// `pi_z(a) = [[E_0(a)(x), sum_{n>=1} E_n(a)(x) z^n], [0, sum_n E_n(a)(eta(x)) z^n]]`;
    /// requires `eta(x) != x`, `eta(eta(x)) = eta(x)` and `|z| < r`.
    Pencil {
        system: Arc<FiniteDynSys>,
        x: usize,
        z: Complex64,
    },
}

pub fn build_offfixed(system: Arc<FiniteDynSys>, x: usize) -> Result<NestRep> {
    system.check_point(x)?;
    if system.is_fixed(x) {
        return Err(Error::FixedPoint { point: x });
    }
    Ok(NestRep::OffFixed { system, x })
}

/// One member of the pencil `P_{x, eta(x)}` over the disc of radius `r`.
pub fn build_pencil(system: Arc<FiniteDynSys>, x: usize, z: Complex64, r: f64) -> Result<NestRep> {
    system.check_point(x)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius(r));
    }
    let y = system.apply(x);
    if y == x {
        return Err(Error::FixedPoint { point: x });
    }
    if system.apply(y) != y {
        return Err(Error::NotPreperiodic { point: x });
    }
    if z.norm() >= r {
        return Err(Error::OnBoundary {
            modulus: z.norm(),
            radius: r,
        });
    }
    Ok(NestRep::Pencil { system, x, z })
}

impl NestRep {
    pub fn system(&self) -> &Arc<FiniteDynSys> {
        match self {
            NestRep::OffFixed { system, .. } | NestRep::Pencil { system, .. } => system,
        }
    }

    pub fn apply(&self, p: &SkewPoly) -> Result<Mat2> {
        let sys = self.system();
        if **p.system() != **sys {
            return Err(Error::SystemMismatch {
                left: p.system().size(),
                right: sys.size(),
            });
        }
        let e = |n: usize, pt: usize| p.coeffs().get(n).map_or(ZERO, |f| f[pt]);
        Ok(match *self {
            NestRep::OffFixed { x, .. } => {
                let y = sys.apply(x);
                Mat2::new(e(0, x), e(1, x), ZERO, e(0, y))
            }
            NestRep::Pencil { x, z, .. } => {
                let y = sys.apply(x);
                let top = series_at(p, x, z) - e(0, x);
                Mat2::new(e(0, x), top, ZERO, series_at(p, y, z))
            }
        })
    }

    /// Diagonal compressions `theta_{pi,i}(a) = <pi(a) xi_i, xi_i>`.
    pub fn extract_characters(&self) -> (Character, Character) {
        let sys = self.system();
        match *self {
            NestRep::OffFixed { x, .. } => (
                Character::at_point(sys, x).expect("validated point"),
                Character::at_point(sys, sys.apply(x)).expect("validated point"),
            ),
            NestRep::Pencil { x, z, .. } => (
                Character::at_point(sys, x).expect("validated point"),
                Character::new(sys, sys.apply(x), z).expect("eta(x) is fixed"),
            ),
        }
    }
}
