//! Point-map witnesses and the sample grids they are checked on.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mobius::MobiusMap;
use crate::par::Execution;

/// Closed-form point maps accepted as conjugacy witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum PointMap {
    Identity,
    /// `r e^{i theta} -> r^2 e^{i theta}`, i.e. `z -> z |z|`.
    RadialSquare,
    /// `w = (z + 1)/(z - 1)`: the disk onto the left half-plane with the
    /// attracting fixed point -1 of the hyperbolic pair sent to 0.
    Cayley,
    #[serde(skip)]
    Mobius(MobiusMap),
}

impl PointMap {
    pub fn cayley_map() -> MobiusMap {
        let one = Complex64::new(1.0, 0.0);
        MobiusMap::new(one, one, one, -one).expect("Cayley map is nonsingular")
    }

    /// Evaluates the map; a pole yields NaN.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        match self {
            PointMap::Identity => z,
            PointMap::RadialSquare => z * z.norm(),
            PointMap::Cayley => Self::cayley_map().apply(z).unwrap_or(nan),
            PointMap::Mobius(m) => m.apply(z).unwrap_or(nan),
        }
    }
}

impl From<MobiusMap> for PointMap {
    fn from(m: MobiusMap) -> Self {
        PointMap::Mobius(m)
    }
}

/// `count` points of the disk `|z| <= radius`, spread by a golden-angle
/// spiral (deterministic, roughly area-uniform).
pub fn disk_samples(count: usize, radius: f64) -> Vec<Complex64> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
            Complex64::from_polar(r, golden * k as f64)
        })
        .collect()
}

/// `max_z |gamma(eta1(z)) - eta2(gamma(z))|` over the samples. NaN when any
/// evaluation hits a pole.
pub fn verify_conjugacy_witness<G, A, B>(
    gamma: G,
    eta1: A,
    eta2: B,
    samples: &[Complex64],
    exec: Execution,
) -> f64
where
    G: Fn(Complex64) -> Complex64 + Sync + Send,
    A: Fn(Complex64) -> Complex64 + Sync + Send,
    B: Fn(Complex64) -> Complex64 + Sync + Send,
{
    exec.max_over(samples, |&z| (gamma(eta1(z)) - eta2(gamma(z))).norm())
}

/// [`verify_conjugacy_witness`] for point maps.
pub fn verify_point_maps(
    gamma: &PointMap,
    eta1: &PointMap,
    eta2: &PointMap,
    samples: &[Complex64],
    exec: Execution,
) -> f64 {
    verify_conjugacy_witness(
        |z| gamma.eval(z),
        |z| eta1.eval(z),
        |z| eta2.eval(z),
        samples,
        exec,
    )
}
