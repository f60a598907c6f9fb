//! Seeded generators for the property sweeps.
//!
//! Every case gets its own ChaCha stream derived from `(seed, stream, index)`
//! so results do not depend on how cases are scheduled across threads.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diskmaps::MobiusMap;
use crate::dynsys::FiniteDynSys;
use crate::repr::HolFn;
use crate::skewpoly::{CoefFn, SkewPoly};

/// Default seed for the verification suite.
pub const DEFAULT_SEED: u64 = 20_260_518;

/// RNG for case `index` of the sweep named `stream`.
pub fn case_rng(seed: u64, stream: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a over the stream name
    let tag = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag);
    rng.set_stream(index);
    rng
}

pub fn random_map(rng: &mut impl Rng, n: usize) -> FiniteDynSys {
    FiniteDynSys::new((0..n).map(|_| rng.random_range(0..n)).collect()).expect("entries in range")
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

/// A point of the closed disk of radius `r`, area-uniform.
pub fn random_in_disk(rng: &mut impl Rng, r: f64) -> Complex64 {
    let rho = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(rho, rng.random_range(0.0..2.0 * PI))
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_coef(rng: &mut impl Rng, n: usize) -> CoefFn {
    CoefFn::new((0..n).map(|_| random_complex(rng)).collect())
}

/// A polynomial of exact degree `deg` with generic coefficients.
pub fn random_poly(rng: &mut impl Rng, sys: &Arc<FiniteDynSys>, deg: usize) -> SkewPoly {
    let coeffs = (0..=deg).map(|_| random_coef(rng, sys.size())).collect();
    SkewPoly::new(sys.clone(), coeffs).expect("coefficients match the system")
}

/// A polynomial of random degree in `0..=max_deg`.
pub fn random_poly_upto(rng: &mut impl Rng, sys: &Arc<FiniteDynSys>, max_deg: usize) -> SkewPoly {
    let deg = rng.random_range(0..=max_deg);
    random_poly(rng, sys, deg)
}

/// A system on `n >= 2` points with a point `x` such that `eta(x) != x` and
/// `eta(x)` is fixed. Returns `(system, x)`.
pub fn random_pencil_system(rng: &mut impl Rng, n: usize) -> (Arc<FiniteDynSys>, usize) {
    assert!(n >= 2);
    let mut map: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let y = rng.random_range(0..n);
    let x = (y + rng.random_range(1..n)) % n;
    map[y] = y;
    map[x] = y;
    (
        Arc::new(FiniteDynSys::new(map).expect("entries in range")),
        x,
    )
}

pub fn random_unimodular(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

/// `z -> e^{i theta}(z - p)/(1 - conj(p) z)` with `|p| <= 0.9`.
pub fn random_disk_automorphism(rng: &mut impl Rng) -> MobiusMap {
    let p = random_in_disk(rng, 0.9);
    MobiusMap::disk_automorphism(p, rng.random_range(0.0..2.0 * PI)).expect("|p| < 1")
}

/// An elliptic Möbius self-map: a conjugate of a rotation (automorphism) or
/// of `z -> lambda z/(1 - kappa z)` with `|lambda| <= 1 - |kappa|`.
pub fn random_elliptic(rng: &mut impl Rng, automorphism: bool) -> MobiusMap {
    let core = if automorphism {
        let mut u = random_unimodular(rng);
        while (u - 1.0).norm() < 1e-3 {
            u = random_unimodular(rng);
        }
        MobiusMap::rotation(u)
    } else {
        let kappa = random_in_disk(rng, 0.8);
        let lambda_abs = rng.random_range(0.05..0.95) * (1.0 - kappa.norm());
        let lambda = Complex64::from_polar(lambda_abs, rng.random_range(0.0..2.0 * PI));
        MobiusMap::fixing_origin(lambda, kappa)
    }
    .expect("nonsingular");
    let g = random_disk_automorphism(rng);
    g.inverse().compose(&core).compose(&g)
}

/// A random polynomial coefficient function `sum_{i<=3} c_i z^i`.
pub fn random_holfn(rng: &mut impl Rng) -> HolFn {
    HolFn::polynomial((0..4).map(|_| random_complex(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diskmaps::{classify, DiskKind};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| case_rng(1, "x", 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| case_rng(1, "x", 3).random()).collect();
        assert_eq!(a, b);
        let c: u64 = case_rng(1, "x", 4).random();
        let d: u64 = case_rng(1, "y", 3).random();
        assert_ne!(a[0], c);
        assert_ne!(a[0], d);
    }

    #[test]
    fn elliptic_generator_hits_its_class() {
        let mut rng = case_rng(7, "elliptic", 0);
        for _ in 0..50 {
            assert_eq!(
                classify(&random_elliptic(&mut rng, true)).unwrap().kind,
                DiskKind::EllipticAutomorphism
            );
            assert_eq!(
                classify(&random_elliptic(&mut rng, false)).unwrap().kind,
                DiskKind::EllipticNonAutomorphism
            );
        }
    }

    #[test]
    fn pencil_systems_satisfy_precondition() {
        let mut rng = case_rng(7, "pencil", 0);
        for n in 2..8 {
            let (s, x) = random_pencil_system(&mut rng, n);
            let y = s.apply(x);
            assert!(y != x && s.apply(y) == y);
        }
    }
}
