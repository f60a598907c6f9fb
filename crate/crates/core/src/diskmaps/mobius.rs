use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::Execution;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance for the disk self-map and automorphism probes.
pub const PROBE_TOL: f64 = 1e-9;
pub const PROBE_BOUNDARY: usize = 720;
pub const PROBE_INTERIOR: usize = 360;

/// `z -> (az + b)/(cz + d)`, stored with `ad - bc = 1`.
///
/// The sign of the matrix is fixed so that the trace has positive real part,
/// or zero real part and nonnegative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} z + {}) / ({} z + {})",
            self.a, self.b, self.c, self.d
        )
    }
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !det.is_finite() || scale == 0.0 || det.norm() <= 1e-14 * scale * scale {
            return Err(Error::Singular);
        }
        let k = det.sqrt().inv();
        let (mut a, mut b, mut c, mut d) = (a * k, b * k, c * k, d * k);
        let tr = a + d;
        if tr.re < -1e-12 || (tr.re.abs() <= 1e-12 && tr.im < 0.0) {
            (a, b, c, d) = (-a, -b, -c, -d);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    /// `z -> c z`.
    pub fn rotation(c: Complex64) -> Result<Self> {
        Self::dilation(c)
    }

    /// `z -> lambda z`.
    pub fn dilation(lambda: Complex64) -> Result<Self> {
        if lambda == ZERO {
            return Err(Error::ZeroScale);
        }
        Self::new(lambda, ZERO, ZERO, ONE)
    }

    /// The disk automorphism `z -> e^{i theta} (z - p)/(1 - conj(p) z)`.
    pub fn disk_automorphism(p: Complex64, theta: f64) -> Result<Self> {
        let u = Complex64::from_polar(1.0, theta);
        Self::new(u, -u * p, -p.conj(), ONE)
    }

    /// `z -> lambda z / (1 - kappa z)`, the shape of a map fixing 0.
    pub fn fixing_origin(lambda: Complex64, kappa: Complex64) -> Result<Self> {
        Self::new(lambda, ZERO, -kappa, ONE)
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        let w = (self.a * z + self.b) / den;
        if den == ZERO || !w.is_finite() {
            return Err(Error::Pole(z));
        }
        Ok(w)
    }

    /// `eta'(z) = (ad - bc)/(cz + d)^2`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        let v = self.determinant() / (den * den);
        if den == ZERO || !v.is_finite() {
            return Err(Error::Pole(z));
        }
        Ok(v)
    }

    pub fn inverse(&self) -> MobiusMap {
        Self::new(self.d, -self.b, -self.c, self.a)
            .expect("inverse of a normalized map is nonsingular")
    }

    /// `self . other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (e, f, g, h) = (other.a, other.b, other.c, other.d);
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            .expect("product of nonsingular maps is nonsingular")
    }

    /// `self^k` for `k >= 0`.
    pub fn power(&self, k: usize) -> MobiusMap {
        (0..k).fold(Self::identity(), |acc, _| self.compose(&acc))
    }

    /// `w -> s w` after `self`.
    pub fn scaled(&self, s: Complex64) -> MobiusMap {
        Self::new(self.a * s, self.b * s, self.c, self.d)
            .expect("scaling by nonzero keeps determinant")
    }

    /// Equality as maps, i.e. of matrices up to sign.
    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        let diff = |s: f64| {
            self.coefficients()
                .iter()
                .zip(other.coefficients())
                .map(|(x, y)| (x - y * s).norm())
                .fold(0.0, f64::max)
        };
        diff(1.0) <= tol || diff(-1.0) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::identity(), tol)
    }

    /// Finite fixed points: roots of `c z^2 + (d - a) z - b = 0`.
    ///
    /// A double root (trace^2 = 4 within `tol`) is reported once. Returns an
    /// empty list for the identity.
    pub fn fixed_points(&self, tol: f64) -> Vec<Complex64> {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if self.is_identity(tol) {
            return Vec::new();
        }
        if c.norm() <= tol {
            // affine: the other fixed point is at infinity
            let lin = d - a;
            return if lin.norm() <= tol {
                Vec::new()
            } else {
                vec![b / lin]
            };
        }
        let disc = self.trace() * self.trace() - Complex64::new(4.0, 0.0);
        if disc.norm() <= tol {
            return vec![(a - d) / (c * 2.0)];
        }
        let s = disc.sqrt();
        vec![(a - d + s) / (c * 2.0), (a - d - s) / (c * 2.0)]
    }

    /// Probe-grid test that the closed unit disk is mapped into itself.
    /// Also requires the pole to lie outside the closed disk.
    pub fn maps_disk_to_disk(&self) -> bool {
        self.max_modulus_on_probe(Execution::Sequential) <= 1.0 + PROBE_TOL
    }

    /// Largest `|eta(z)|` over the probe grid (infinite when a pole is inside
    /// the closed disk).
    pub fn max_modulus_on_probe(&self, exec: Execution) -> f64 {
        if self.c.norm() >= self.d.norm() {
            return f64::INFINITY;
        }
        let grid = probe_grid();
        exec.max_over(&grid, |&z| {
            self.apply(z).map_or(f64::INFINITY, |w| w.norm())
        })
    }

    /// Automorphism test: `|eta| = 1` on every boundary probe.
    pub fn is_disk_automorphism(&self) -> bool {
        self.maps_disk_to_disk()
            && boundary_probe().iter().all(|&z| {
                self.apply(z)
                    .is_ok_and(|w| (w.norm() - 1.0).abs() <= PROBE_TOL)
            })
    }
}

pub fn boundary_probe() -> Vec<Complex64> {
    (0..PROBE_BOUNDARY)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / PROBE_BOUNDARY as f64))
        .collect()
}

/// 720 boundary points plus 360 interior points on three rings.
pub fn probe_grid() -> Vec<Complex64> {
    let mut grid = boundary_probe();
    let per_ring = PROBE_INTERIOR / 3;
    for r in [0.25, 0.5, 0.75] {
        grid.extend(
            (0..per_ring)
                .map(|k| Complex64::from_polar(r, 2.0 * PI * (k as f64 + 0.5) / per_ring as f64)),
        );
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn remark_eta1() -> MobiusMap {
        MobiusMap::new(ONE, c(-0.5, 0.0), c(-0.5, 0.0), ONE).unwrap()
    }

    #[test]
    fn evaluation() {
        let m = remark_eta1();
        assert!((m.apply(ZERO).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);
        let z = c(0.3, 0.7);
        assert_eq!(MobiusMap::identity().apply(z).unwrap(), z);
        assert!(m.compose(&m.inverse()).is_identity(1e-12));
        assert!(m.inverse().compose(&m).is_identity(1e-12));
    }

    #[test]
    fn pole_is_reported() {
        let m = remark_eta1();
        assert_eq!(m.apply(c(2.0, 0.0)), Err(Error::Pole(c(2.0, 0.0))));
        assert!(m.derivative(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(MobiusMap::new(ONE, ONE, ONE, ONE), Err(Error::Singular));
        assert_eq!(MobiusMap::dilation(ZERO), Err(Error::ZeroScale));
    }

    #[test]
    fn normalization_is_sign_canonical() {
        let m = MobiusMap::new(c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        let n = MobiusMap::new(c(-2.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0)).unwrap();
        assert_eq!(m, n);
        assert!((m.determinant() - ONE).norm() < 1e-15);
        assert!(m.trace().re > 0.0);
    }

    #[test]
    fn derivative_formula() {
        let m = MobiusMap::new(c(1.0, 0.5), c(0.2, 0.0), c(-0.3, 0.1), c(2.0, 0.0)).unwrap();
        let z = c(0.1, -0.2);
        let h = 1e-6;
        let fd = (m.apply(z + h).unwrap() - m.apply(z - h).unwrap()) / (2.0 * h);
        assert!((fd - m.derivative(z).unwrap()).norm() < 1e-8);
    }

    #[test]
    fn composition_is_matrix_product() {
        let m = remark_eta1();
        let r = MobiusMap::rotation(Complex64::from_polar(1.0, 0.4)).unwrap();
        let z = c(0.2, 0.3);
        let lhs = m.compose(&r).apply(z).unwrap();
        let rhs = m.apply(r.apply(z).unwrap()).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(m.power(3).approx_eq(&m.compose(&m).compose(&m), 1e-12));
    }

    #[test]
    fn fixed_points_of_examples() {
        let mut fps = remark_eta1().fixed_points(1e-9);
        fps.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((fps[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((fps[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(MobiusMap::identity().fixed_points(1e-9).is_empty());
        let rot = MobiusMap::rotation(c(0.0, 1.0)).unwrap();
        assert_eq!(rot.fixed_points(1e-9), vec![ZERO]);
    }

    /// Exact criterion: the image of the unit circle has center
    /// (b conj(d) - a conj(c))/(|d|^2 - |c|^2) and radius
    /// |ad - bc|/(|d|^2 - |c|^2).
    fn exact_self_map(m: &MobiusMap) -> bool {
        let [a, b, cc, d] = m.coefficients();
        let den = d.norm_sqr() - cc.norm_sqr();
        if den <= 0.0 {
            return false;
        }
        let center = (b * d.conj() - a * cc.conj()) / den;
        let radius = m.determinant().norm() / den;
        center.norm() + radius <= 1.0 + 1e-9
    }

    #[test]
    fn probe_matches_exact_criterion() {
        let cases = [
            remark_eta1(),
            MobiusMap::dilation(c(0.5, 0.0)).unwrap(),
            MobiusMap::dilation(c(1.2, 0.0)).unwrap(),
            MobiusMap::fixing_origin(c(0.5, 0.0), c(0.4, 0.0)).unwrap(),
            MobiusMap::fixing_origin(c(0.5, 0.0), c(0.6, 0.0)).unwrap(),
            MobiusMap::new(c(0.5, 0.0), c(0.5, 0.0), ZERO, ONE).unwrap(),
            MobiusMap::new(c(0.5, 0.0), c(0.6, 0.0), ZERO, ONE).unwrap(),
            MobiusMap::new(ONE, ZERO, ONE, ONE).unwrap(),
        ];
        for m in cases {
            assert_eq!(m.maps_disk_to_disk(), exact_self_map(&m), "{m}");
        }
    }

    #[test]
    fn automorphism_probe() {
        assert!(remark_eta1().is_disk_automorphism());
        assert!(MobiusMap::disk_automorphism(c(0.3, -0.5), 1.1)
            .unwrap()
            .is_disk_automorphism());
        assert!(!MobiusMap::dilation(c(0.5, 0.0))
            .unwrap()
            .is_disk_automorphism());
        assert_eq!(probe_grid().len(), PROBE_BOUNDARY + PROBE_INTERIOR);
    }
}
