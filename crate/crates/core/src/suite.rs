//! Seeded property sweeps over every module.
//!
//! Each property runs a number of independent cases. Case `i` of property
//! `name` draws from [`case_rng`]`(seed, name, i)`, so a failure is reproduced
//! from `(seed, name, index)` alone and the report does not depend on thread
//! scheduling.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charspace::Character;
use crate::diskmaps::{
    analytically_conjugate, classify, disk_samples, intertwining_deviation, normal_form,
    real_translation, semicrossed_iso_verdict, verify_conjugacy_witness, verify_point_maps,
    DiskKind, IsoVerdict, MobiusMap, NormalForm, PointMap, WITNESS_TOL,
};
use crate::dynsys::{
    are_conjugate, brute_force_conjugate, canonical_form, fixed_points, ConjugacyWitness,
    FiniteDynSys,
};
use crate::par::Execution;
use crate::random::*;
use crate::repr::{
    build_fixed_derivative, build_offfixed, build_pencil, norm_estimate, shift_power_norms,
    spectral_radius_estimate, CMatrix, Convention, DiskSkewPoly, Mat2, NestRep, TruncatedRep,
};
use crate::skewpoly::oracle::rewrite_product;
use crate::skewpoly::{CoefFn, SkewPoly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Truncations used for the monotonicity check of norm estimates.
const NORM_CHAIN: [usize; 20] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 24, 32, 48, 64,
];

/// Case counts and size caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteSizes {
    /// Largest finite system (the brute-force oracle is factorial in it).
    pub max_n: usize,
    pub oracle_pairs: usize,
    pub product_pairs: usize,
    pub pencil_cases: usize,
    pub elliptic_maps: usize,
    pub rotations: usize,
    pub norm_polys: usize,
    pub shift_systems: usize,
    /// Cases for the remaining algebraic identities.
    pub misc_cases: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            max_n: 7,
            oracle_pairs: 10_000,
            product_pairs: 1_000,
            pencil_cases: 1_000,
            elliptic_maps: 100,
            rotations: 50,
            norm_polys: 100,
            shift_systems: 8,
            misc_cases: 300,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureCase {
    pub index: usize,
    /// `None` when the case failed a logical check rather than a tolerance.
    pub deviation: Option<f64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// First failing case.
    pub failure: Option<FailureCase>,
}

impl PropertyResult {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub sizes: SuiteSizes,
    pub passed: bool,
    pub total_cases: usize,
    pub failed_cases: usize,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

/// Deviation on success, message on a failed logical check.
type CaseResult = std::result::Result<f64, String>;

struct Property {
    name: &'static str,
    module: &'static str,
    statement: &'static str,
    tolerance: f64,
}

fn sweep<F>(seed: u64, exec: Execution, prop: Property, cases: usize, f: F) -> PropertyResult
where
    F: Fn(&mut ChaCha8Rng) -> CaseResult + Sync + Send,
{
    let outcomes = exec.map_indexed(cases, |i| f(&mut case_rng(seed, prop.name, i as u64)));
    let mut result = PropertyResult {
        name: prop.name,
        module: prop.module,
        statement: prop.statement,
        cases,
        passed: 0,
        failed: 0,
        max_deviation: 0.0,
        tolerance: prop.tolerance,
        failure: None,
    };
    for (index, outcome) in outcomes.into_iter().enumerate() {
        let failure = match outcome {
            Ok(d) => {
                result.max_deviation = if d.is_nan() {
                    f64::NAN
                } else {
                    result.max_deviation.max(d)
                };
                if d <= prop.tolerance {
                    None
                } else {
                    Some(FailureCase {
                        index,
                        deviation: Some(d),
                        message: format!("deviation {d:e} exceeds {:e}", prop.tolerance),
                    })
                }
            }
            Err(message) => Some(FailureCase {
                index,
                deviation: None,
                message,
            }),
        };
        match failure {
            None => result.passed += 1,
            Some(fc) => {
                result.failed += 1;
                result.failure.get_or_insert(fc);
            }
        }
    }
    result
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CaseResult {
    if cond {
        Ok(0.0)
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    format!("{}: {e}", e.code())
}

fn random_system(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> Arc<FiniteDynSys> {
    let n = rng.random_range(min_n..=max_n.max(min_n));
    Arc::new(random_map(rng, n))
}

/// A system and a point moved by it.
fn system_with_moved_point(rng: &mut ChaCha8Rng, max_n: usize) -> (Arc<FiniteDynSys>, usize) {
    let n = rng.random_range(2..=max_n.max(2));
    let mut map = random_map(rng, n).map().to_vec();
    let x = rng.random_range(0..n);
    if map[x] == x {
        map[x] = (x + rng.random_range(1..n)) % n;
    }
    (
        Arc::new(FiniteDynSys::new(map).expect("entries in range")),
        x,
    )
}

/// A system, a point and an admissible disc parameter: `|z| <= 0.9` at a
/// fixed point (forced half of the time), `z = 0` elsewhere.
fn system_point_param(rng: &mut ChaCha8Rng, max_n: usize) -> (Arc<FiniteDynSys>, usize, Complex64) {
    let n = rng.random_range(1..=max_n);
    let mut map = random_map(rng, n).map().to_vec();
    let x = rng.random_range(0..n);
    if rng.random_bool(0.5) {
        map[x] = x;
    }
    let sys = Arc::new(FiniteDynSys::new(map).expect("entries in range"));
    let z = if sys.is_fixed(x) {
        random_in_disk(rng, 0.9)
    } else {
        ZERO
    };
    (sys, x, z)
}

fn mat2_dev(a: &Mat2, b: &Mat2) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn cmat_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `C T C^-1` with `T(w) = w + direction` on the right half-plane and the
/// Cayley map `C(w) = (w - 1)/(w + 1)`. Imaginary `direction` gives a
/// parabolic automorphism, positive real part a parabolic non-automorphism.
fn parabolic_model(direction: Complex64) -> MobiusMap {
    let cayley = MobiusMap::new(ONE, -ONE, ONE, ONE).expect("nonsingular");
    let t = MobiusMap::new(ONE, direction, ZERO, ONE).expect("nonsingular");
    cayley.compose(&t).compose(&cayley.inverse())
}

/// A disk self-map of the given family (0..6).
fn disk_map_family(rng: &mut ChaCha8Rng, family: usize) -> MobiusMap {
    match family {
        0 => random_elliptic(rng, true),
        1 => random_elliptic(rng, false),
        2 => {
            // hyperbolic automorphism
            real_translation(rng.random_range(0.1..0.9))
        }
        3 => {
            let t = rng.random_range(0.2..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            parabolic_model(Complex64::new(0.0, t))
        }
        4 => parabolic_model(Complex64::new(
            rng.random_range(0.2..2.0),
            rng.random_range(-1.0..1.0),
        )),
        _ => {
            // z -> (1 - s) z + s fixes 1 and infinity
            let s = Complex64::new(rng.random_range(0.1..0.9), 0.0);
            MobiusMap::new(ONE - s, s, ZERO, ONE).expect("nonsingular")
        }
    }
}

fn holfn_poly(rng: &mut ChaCha8Rng, map: MobiusMap, max_deg: usize) -> DiskSkewPoly {
    let deg = rng.random_range(0..=max_deg);
    DiskSkewPoly::new(map, (0..=deg).map(|_| random_holfn(rng)).collect())
}

/// Runs every property with the given seed and sizes.
pub fn verify_suite(seed: u64, sizes: SuiteSizes, exec: Execution) -> SuiteReport {
    let n = sizes.max_n.max(1);
    let mut props = Vec::new();
    let mut run = |prop: Property,
                   cases: usize,
                   f: &(dyn Fn(&mut ChaCha8Rng) -> CaseResult + Sync + Send)| {
        props.push(sweep(seed, exec, prop, cases, f));
    };

    // dynsys
    run(
        Property {
            name: "dynsys.oracle_agreement",
            module: "dynsys",
            statement:
                "are_conjugate agrees with the brute-force oracle; every witness intertwines",
            tolerance: 0.0,
        },
        sizes.oracle_pairs,
        &|rng| {
            let k = rng.random_range(1..=n);
            let a = random_map(rng, k);
            let b = if rng.random_bool(0.5) {
                a.relabel(&random_permutation(rng, k)).expect("permutation")
            } else {
                random_map(rng, k)
            };
            let fast = are_conjugate(&a, &b);
            let slow = brute_force_conjugate(&a, &b).map_err(err)?;
            if fast.is_some() != slow.is_some() {
                return Err(format!(
                    "{a} vs {b}: canonical says {}, oracle says {}",
                    fast.is_some(),
                    slow.is_some()
                ));
            }
            for w in fast.iter().chain(slow.iter()) {
                ensure(w.intertwines(&a, &b), || {
                    format!("{a} vs {b}: witness {:?} fails", w.bijection())
                })?;
            }
            Ok(0.0)
        },
    );
    run(
        Property {
            name: "dynsys.canonical_relabel_invariance",
            module: "dynsys",
            statement: "canonical_form(sys) = canonical_form(relabeled sys)",
            tolerance: 0.0,
        },
        sizes.misc_cases,
        &|rng| {
            let k = rng.random_range(1..=n);
            let a = random_map(rng, k);
            let sigma = random_permutation(rng, k);
            let b = a.relabel(&sigma).expect("permutation");
            ensure(ConjugacyWitness::new(sigma.clone(), &a, &b).is_ok(), || {
                format!("relabeling {sigma:?} of {a} is not a conjugacy")
            })?;
            ensure(canonical_form(&a) == canonical_form(&b), || {
                format!("{a} vs {b}")
            })
        },
    );
    run(
        Property {
            name: "dynsys.witness_preserves_fixed_points",
            module: "dynsys",
            statement: "witnesses carry the fixed point set onto the fixed point set",
            tolerance: 0.0,
        },
        sizes.misc_cases,
        &|rng| {
            let k = rng.random_range(1..=n);
            let a = random_map(rng, k);
            let b = a.relabel(&random_permutation(rng, k)).expect("permutation");
            let w = are_conjugate(&a, &b)
                .ok_or_else(|| format!("{a} vs relabeled {b} not recognized"))?;
            let image: std::collections::BTreeSet<usize> =
                fixed_points(&a).iter().map(|&i| w.apply(i)).collect();
            ensure(image == fixed_points(&b), || {
                format!("{a} vs {b}: fixed points not preserved")
            })
        },
    );

    // skewpoly
    run(
        Property {
            name: "skewpoly.convolution_matches_rewriting",
            module: "skewpoly",
            statement: "convolution product equals term rewriting with U f -> (f . eta) U",
            tolerance: 1e-12,
        },
        sizes.product_pairs,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let p = random_poly_upto(rng, &sys, 5);
            let q = random_poly_upto(rng, &sys, 5);
            let fast = p.try_mul(&q).map_err(err)?;
            let slow = rewrite_product(&p, &q).map_err(err)?;
            if fast.coeffs().len() != slow.coeffs().len() {
                return Err(format!(
                    "degree mismatch: {:?} vs {:?}",
                    fast.degree(),
                    slow.degree()
                ));
            }
            Ok(fast.max_abs_diff(&slow))
        },
    );
    run(
        Property {
            name: "skewpoly.associativity",
            module: "skewpoly",
            statement: "(pq)r = p(qr)",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let p = random_poly_upto(rng, &sys, 4);
            let q = random_poly_upto(rng, &sys, 4);
            let r = random_poly_upto(rng, &sys, 4);
            Ok((&(&p * &q) * &r).max_abs_diff(&(&p * &(&q * &r))))
        },
    );
    run(
        Property {
            name: "skewpoly.covariance",
            module: "skewpoly",
            statement: "U f = (f . eta) U as polynomials",
            tolerance: 0.0,
        },
        sizes.misc_cases,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let f = random_coef(rng, sys.size());
            let u = SkewPoly::shift(sys.clone());
            let fp = SkewPoly::constant(sys.clone(), f.clone()).expect("length");
            let fe = SkewPoly::constant(sys.clone(), f.compose(sys.map())).expect("length");
            Ok((&u * &fp).max_abs_diff(&(&fe * &u)))
        },
    );
    run(
        Property {
            name: "skewpoly.coefficient_additivity",
            module: "skewpoly",
            statement: "E_n(p + q) = E_n(p) + E_n(q)",
            tolerance: 0.0,
        },
        sizes.misc_cases,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let p = random_poly_upto(rng, &sys, 5);
            let q = random_poly_upto(rng, &sys, 5);
            let s = &p + &q;
            Ok((0..7)
                .map(|k| {
                    let expected = CoefFn::new(
                        p.coefficient(k)
                            .values()
                            .iter()
                            .zip(q.coefficient(k).values())
                            .map(|(a, b)| a + b)
                            .collect(),
                    );
                    s.coefficient(k).max_abs_diff(&expected)
                })
                .fold(0.0, f64::max))
        },
    );
    run(
        Property {
            name: "skewpoly.transport_intertwines",
            module: "skewpoly",
            statement: "transport moves coefficients along the witness and is multiplicative",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let k = rng.random_range(1..=n);
            let a = Arc::new(random_map(rng, k));
            let sigma = random_permutation(rng, k);
            let b = Arc::new(a.relabel(&sigma).expect("permutation"));
            let w = ConjugacyWitness::new(sigma.clone(), &a, &b).map_err(err)?;
            let p = random_poly_upto(rng, &a, 4);
            let q = random_poly_upto(rng, &a, 4);
            let tp = p.transport(&w, b.clone()).map_err(err)?;
            for deg in 0..=4 {
                let (src, dst) = (p.coefficient(deg), tp.coefficient(deg));
                ensure((0..k).all(|i| dst[sigma[i]] == src[i]), || {
                    format!("coefficient {deg} not moved along {sigma:?}")
                })?;
            }
            let tq = q.transport(&w, b.clone()).map_err(err)?;
            let tpq = (&p * &q).transport(&w, b).map_err(err)?;
            Ok(tpq.max_abs_diff(&(&tp * &tq)))
        },
    );

    // charspace
    run(
        Property {
            name: "charspace.multiplicativity",
            module: "charspace",
            statement: "theta_{x,z}(pq) = theta_{x,z}(p) theta_{x,z}(q) for |z| <= 0.9",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let (sys, x, z) = system_point_param(rng, n);
            let ch = Character::new(&sys, x, z).map_err(err)?;
            let p = random_poly_upto(rng, &sys, 6);
            let q = random_poly_upto(rng, &sys, 6);
            let lhs = ch.eval(&(&p * &q)).map_err(err)?;
            let rhs = ch.eval(&p).map_err(err)? * ch.eval(&q).map_err(err)?;
            Ok((lhs - rhs).norm())
        },
    );
    run(
        Property {
            name: "charspace.transport",
            module: "charspace",
            statement: "theta_{sigma(x),z}(transport(p)) = theta_{x,z}(p)",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let (a, x, z) = system_point_param(rng, n);
            let sigma = random_permutation(rng, a.size());
            let b = Arc::new(a.relabel(&sigma).expect("permutation"));
            let w = ConjugacyWitness::new(sigma.clone(), &a, &b).map_err(err)?;
            let p = random_poly_upto(rng, &a, 6);
            let lhs = Character::new(&b, sigma[x], z)
                .map_err(err)?
                .eval(&p.transport(&w, b.clone()).map_err(err)?)
                .map_err(err)?;
            let rhs = Character::new(&a, x, z)
                .map_err(err)?
                .eval(&p)
                .map_err(err)?;
            Ok((lhs - rhs).norm())
        },
    );
    run(
        Property {
            name: "charspace.nonfixed_kills_shift",
            module: "charspace",
            statement: "at a non-fixed point the character only sees E_0",
            tolerance: 0.0,
        },
        sizes.misc_cases,
        &|rng| {
            let (sys, x) = system_with_moved_point(rng, n);
            let ch = Character::at_point(&sys, x).map_err(err)?;
            let p = random_poly_upto(rng, &sys, 6);
            let mut dev = (ch.eval(&p).map_err(err)? - p.coefficient(0)[x]).norm();
            for k in 1..4 {
                let m = SkewPoly::monomial(sys.clone(), random_coef(rng, sys.size()), k)
                    .map_err(err)?;
                dev = dev.max(ch.eval(&m).map_err(err)?.norm());
            }
            ensure(
                Character::new(&sys, x, Complex64::new(0.5, 0.0)).is_err(),
                || format!("disc parameter accepted at non-fixed point {x} of {sys}"),
            )?;
            Ok(dev)
        },
    );

    // repr
    run(
        Property {
            name: "repr.pencil_homomorphism",
            module: "repr",
            statement: "pi_z(pq) = pi_z(p) pi_z(q) and pi_z(U) = [[0, z], [0, z]]",
            tolerance: 1e-12,
        },
        sizes.pencil_cases,
        &|rng| {
            let size = rng.random_range(2..=n.max(2));
            let (sys, x) = random_pencil_system(rng, size);
            let z = random_in_disk(rng, 0.9);
            let pi = build_pencil(sys.clone(), x, z, 1.0).map_err(err)?;
            let u = pi.apply(&SkewPoly::shift(sys.clone())).map_err(err)?;
            ensure(u == Mat2::new(ZERO, z, ZERO, z), || {
                format!("pi_z(U) = {u} for z = {z}")
            })?;
            let p = random_poly_upto(rng, &sys, 8);
            let q = random_poly_upto(rng, &sys, 8);
            let lhs = pi.apply(&(&p * &q)).map_err(err)?;
            let rhs = pi.apply(&p).map_err(err)? * pi.apply(&q).map_err(err)?;
            Ok(mat2_dev(&lhs, &rhs))
        },
    );
    run(
        Property {
            name: "repr.offfixed_homomorphism",
            module: "repr",
            statement: "rho(pq) = rho(p) rho(q) for the off-fixed representation",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let (sys, x) = system_with_moved_point(rng, n);
            let rho = build_offfixed(sys.clone(), x).map_err(err)?;
            let p = random_poly_upto(rng, &sys, 5);
            let q = random_poly_upto(rng, &sys, 5);
            let lhs = rho.apply(&(&p * &q)).map_err(err)?;
            let rhs = rho.apply(&p).map_err(err)? * rho.apply(&q).map_err(err)?;
            Ok(mat2_dev(&lhs, &rhs))
        },
    );
    run(
        Property {
            name: "repr.characters_over_image_point",
            module: "repr",
            statement: "the diagonal characters of a nest representation sit over x and eta(x)",
            tolerance: 1e-12,
        },
        sizes.pencil_cases,
        &|rng| {
            let rep: NestRep = if rng.random_bool(0.5) {
                let (sys, x) = system_with_moved_point(rng, n);
                build_offfixed(sys, x).map_err(err)?
            } else {
                let size = rng.random_range(2..=n.max(2));
                let (sys, x) = random_pencil_system(rng, size);
                build_pencil(sys, x, random_in_disk(rng, 0.9), 1.0).map_err(err)?
            };
            let sys = rep.system().clone();
            let (t1, t2) = rep.extract_characters();
            ensure(t2.point() == sys.apply(t1.point()), || {
                format!("characters at {} and {} in {sys}", t1.point(), t2.point())
            })?;
            // the characters are the diagonal compressions
            let p = random_poly_upto(rng, &sys, 6);
            let m = rep.apply(&p).map_err(err)?;
            let d1 = (t1.eval(&p).map_err(err)? - m[(0, 0)]).norm();
            let d2 = (t2.eval(&p).map_err(err)? - m[(1, 1)]).norm();
            Ok(d1.max(d2))
        },
    );
    run(
        Property {
            name: "repr.fixed_derivative_homomorphism",
            module: "repr",
            statement: "the fixed-derivative representation is multiplicative",
            tolerance: 1e-12,
        },
        sizes.elliptic_maps,
        &|rng| {
            let auto = rng.random_bool(0.5);
            let m = random_elliptic(rng, auto);
            let x = classify(&m)
                .map_err(err)?
                .distinguished_point()
                .ok_or("no fixed point")?;
            let z = random_in_disk(rng, 0.9);
            let a = random_in_disk(rng, 1.0) + Complex64::new(0.1, 0.0);
            let rep = build_fixed_derivative(&m, x, z, a, 1.0).map_err(err)?;
            let p = holfn_poly(rng, m, 3);
            let q = holfn_poly(rng, m, 3);
            let lhs = rep.apply(&p.try_mul(&q).map_err(err)?).map_err(err)?;
            let rhs = rep.apply(&p).map_err(err)? * rep.apply(&q).map_err(err)?;
            Ok(mat2_dev(&lhs, &rhs))
        },
    );
    run(
        Property {
            name: "repr.truncated_covariance",
            module: "repr",
            statement: "truncated images respect U f = (f . eta) U exactly",
            tolerance: 0.0,
        },
        sizes.misc_cases,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let x = rng.random_range(0..sys.size());
            let trunc = rng.random_range(1..=12);
            let f = random_coef(rng, sys.size());
            let u = SkewPoly::shift(sys.clone());
            let fp = SkewPoly::constant(sys.clone(), f.clone()).expect("length");
            let fe = SkewPoly::constant(sys.clone(), f.compose(sys.map())).expect("length");
            let mut dev: f64 = 0.0;
            for conv in [Convention::Backward, Convention::Forward] {
                let rep = TruncatedRep::new(sys.clone(), x, trunc, conv).map_err(err)?;
                let m = |p: &SkewPoly| rep.rep_matrix(p).expect("same system").matrix;
                dev = dev.max(match conv {
                    Convention::Backward => cmat_dev(&(m(&u) * m(&fp)), &(m(&fe) * m(&u))),
                    Convention::Forward => cmat_dev(&(m(&fp) * m(&u)), &(m(&u) * m(&fe))),
                });
            }
            Ok(dev)
        },
    );
    run(
        Property {
            name: "repr.truncated_multiplicative",
            module: "repr",
            statement: "Backward(pq) = Backward(p) Backward(q) at every truncation",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let x = rng.random_range(0..sys.size());
            let trunc = rng.random_range(1..=16);
            let rep =
                TruncatedRep::new(sys.clone(), x, trunc, Convention::Backward).map_err(err)?;
            let p = random_poly_upto(rng, &sys, 5);
            let q = random_poly_upto(rng, &sys, 5);
            let m = |p: &SkewPoly| rep.rep_matrix(p).expect("same system").matrix;
            Ok(cmat_dev(&m(&(&p * &q)), &(m(&p) * m(&q))))
        },
    );
    run(
        Property {
            name: "repr.forward_backward_anti_isomorphism",
            module: "repr",
            statement: "Forward(pq) = Forward(q) Forward(p) = transpose(Backward(pq))",
            tolerance: 1e-12,
        },
        sizes.misc_cases,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let x = rng.random_range(0..sys.size());
            let trunc = rng.random_range(1..=16);
            let fwd = TruncatedRep::new(sys.clone(), x, trunc, Convention::Forward).map_err(err)?;
            let bwd =
                TruncatedRep::new(sys.clone(), x, trunc, Convention::Backward).map_err(err)?;
            let p = random_poly_upto(rng, &sys, 5);
            let q = random_poly_upto(rng, &sys, 5);
            let pq = &p * &q;
            let f = |p: &SkewPoly| fwd.rep_matrix(p).expect("same system").matrix;
            let b = |p: &SkewPoly| bwd.rep_matrix(p).expect("same system").matrix;
            let anti = cmat_dev(&f(&pq), &(f(&q) * f(&p)));
            let transpose = cmat_dev(&f(&pq), &b(&pq).transpose());
            ensure(transpose == 0.0, || {
                format!("Forward(pq) differs from Backward(pq)^T by {transpose:e}")
            })?;
            Ok(anti)
        },
    );
    run(
        Property {
            name: "repr.norm_monotone_and_l1_bound",
            module: "repr",
            statement: "norm_estimate is nondecreasing in the truncation and at most l1_norm",
            tolerance: 1e-12,
        },
        sizes.norm_polys,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let p = random_poly_upto(rng, &sys, 5);
            let conv = if rng.random_bool(0.5) {
                Convention::Backward
            } else {
                Convention::Forward
            };
            let points: Vec<usize> = (0..sys.size()).collect();
            let l1 = p.l1_norm();
            let mut prev: f64 = 0.0;
            let mut dev: f64 = 0.0;
            for trunc in NORM_CHAIN {
                let est =
                    norm_estimate(&p, trunc, &points, conv, Execution::Sequential).map_err(err)?;
                dev = dev.max(prev - est).max(est - l1);
                prev = est;
            }
            Ok(dev)
        },
    );
    run(
        Property {
            name: "repr.unit_shift_power_norms",
            module: "repr",
            statement: "||U^n|| = 1 for n <= 64 in unit-shift models, so the radius estimate is 1",
            tolerance: 1e-12,
        },
        sizes.shift_systems,
        &|rng| {
            let sys = random_system(rng, 1, n);
            let unit = CoefFn::constant(sys.size(), ONE);
            let mut dev: f64 = 0.0;
            for x in 0..sys.size() {
                // V^64 vanishes on 64 coordinates, so 65 are needed
                let norms = shift_power_norms(&sys, &unit, x, 65, 64).map_err(err)?;
                dev = norms.iter().fold(dev, |d, v| d.max((v - 1.0).abs()));
            }
            let points: Vec<usize> = (0..sys.size()).collect();
            let r = spectral_radius_estimate(&sys, &unit, &points, 65, Execution::Sequential)
                .map_err(err)?;
            Ok(dev.max((r - 1.0).abs()))
        },
    );

    // diskmaps
    run(
        Property {
            name: "diskmaps.multiplier_invariance",
            module: "diskmaps",
            statement:
                "the multiplier at the fixed point is invariant under conjugation by automorphisms",
            tolerance: 1e-10,
        },
        sizes.elliptic_maps,
        &|rng| {
            let auto = rng.random_bool(0.5);
            let m = random_elliptic(rng, auto);
            let g = random_disk_automorphism(rng);
            let m2 = g.compose(&m).compose(&g.inverse());
            let (c1, c2) = (classify(&m).map_err(err)?, classify(&m2).map_err(err)?);
            ensure(c1.kind == c2.kind, || {
                format!("kinds {:?} vs {:?}", c1.kind, c2.kind)
            })?;
            Ok((c1.multiplier - c2.multiplier).norm())
        },
    );
    run(
        Property {
            name: "diskmaps.inverse_multiplier",
            module: "diskmaps",
            statement: "the inverse of an elliptic automorphism has the conjugate multiplier",
            tolerance: 1e-10,
        },
        sizes.elliptic_maps,
        &|rng| {
            let m = random_elliptic(rng, true);
            let c = classify(&m).map_err(err)?.multiplier;
            let ci = classify(&m.inverse()).map_err(err)?.multiplier;
            Ok((ci - c.inv()).norm().max((ci - c.conj()).norm()))
        },
    );
    run(
        Property {
            name: "diskmaps.schwarz_consistency",
            module: "diskmaps",
            statement:
                "|multiplier| < 1 for elliptic non-automorphisms and = 1 for elliptic automorphisms",
            tolerance: 1e-9,
        },
        sizes.elliptic_maps,
        &|rng| {
            let auto = rng.random_bool(0.5);
            let cls = classify(&random_elliptic(rng, auto)).map_err(err)?;
            let modulus = cls.multiplier.norm();
            match cls.kind {
                DiskKind::EllipticAutomorphism if auto => Ok((modulus - 1.0).abs()),
                DiskKind::EllipticNonAutomorphism if !auto => {
                    ensure(modulus < 1.0 - 1e-9, || format!("|multiplier| = {modulus}"))
                }
                kind => Err(format!(
                    "generated {} map classified as {kind:?}",
                    if auto {
                        "automorphic"
                    } else {
                        "non-automorphic"
                    }
                )),
            }
        },
    );
    run(
        Property {
            name: "diskmaps.witness_soundness",
            module: "diskmaps",
            statement: "conjugated copies are recognized and the witness intertwines",
            tolerance: WITNESS_TOL,
        },
        sizes.elliptic_maps * 3,
        &|rng| {
            let family = rng.random_range(0..6);
            let m = disk_map_family(rng, family);
            let g = random_disk_automorphism(rng);
            let m2 = g.compose(&m).compose(&g.inverse());
            let w = analytically_conjugate(&m, &m2)
                .map_err(err)?
                .ok_or_else(|| {
                    format!("family {family}: {m} and its conjugate {m2} not recognized")
                })?;
            let samples = disk_samples(1000, 1.0);
            let dev = verify_conjugacy_witness(
                |z| {
                    w.gamma
                        .apply(z)
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                },
                |z| m.apply(z).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
                |z| m2.apply(z).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
                &samples,
                Execution::Sequential,
            );
            ensure(w.gamma.is_disk_automorphism(), || {
                format!("witness {} is not an automorphism", w.gamma)
            })?;
            Ok(dev.max(w.deviation))
        },
    );
    run(
        Property {
            name: "diskmaps.fixed_derivative_characters",
            module: "diskmaps",
            statement:
                "theta_1(U) = eta'(x) theta_2(U), with eta'(x) matching a central difference",
            tolerance: 1e-6,
        },
        sizes.elliptic_maps,
        &|rng| {
            let auto = rng.random_bool(0.5);
            let m = random_elliptic(rng, auto);
            let x = classify(&m)
                .map_err(err)?
                .distinguished_point()
                .ok_or("no fixed point")?;
            let z = random_in_disk(rng, 0.9);
            let rep = build_fixed_derivative(&m, x, z, ONE, 1.0).map_err(err)?;
            let (t1, t2) = rep.extract_characters();
            let u = DiskSkewPoly::shift(m);
            let eta_prime = m.derivative(x).map_err(err)?;
            let relation = (t1.eval(&u) - eta_prime * t2.eval(&u)).norm();
            ensure(relation <= 1e-12, || {
                format!("theta_1(U) - eta'(x) theta_2(U) = {relation:e}")
            })?;
            let h = 1e-5;
            let fd = (m.apply(x + h).map_err(err)? - m.apply(x - h).map_err(err)?) / (2.0 * h);
            Ok((fd - eta_prime).norm())
        },
    );
    run(
        Property {
            name: "diskmaps.rotation_dichotomy",
            module: "diskmaps",
            statement: "rotations by c and c' give isomorphic algebras iff c' = c or c' = conj(c)",
            tolerance: 0.0,
        },
        sizes.rotations,
        &|rng| {
            let c = loop {
                let c = random_unimodular(rng);
                if c.im.abs() > 1e-3 {
                    break c;
                }
            };
            let other = loop {
                let d = random_unimodular(rng);
                if (d - c).norm() > 1e-3 && (d - c.conj()).norm() > 1e-3 {
                    break d;
                }
            };
            let rot = |c: Complex64| MobiusMap::rotation(c).expect("unimodular");
            for (c2, expected) in [
                (c, IsoVerdict::Conjugate),
                (c.conj(), IsoVerdict::InverseConjugate),
                (other, IsoVerdict::NotIsomorphic),
            ] {
                let v = semicrossed_iso_verdict(&rot(c), &rot(c2))
                    .map_err(err)?
                    .verdict;
                ensure(v == expected, || {
                    format!("verdict({c}z, {c2}z) = {v:?}, expected {expected:?}")
                })?;
            }
            Ok(0.0)
        },
    );
    run(
        Property {
            name: "diskmaps.worked_examples",
            module: "diskmaps",
            statement:
                "radial-square witness, the Möbius pair's dilation ratios and the Cayley witness",
            tolerance: 1e-10,
        },
        1,
        &|_| worked_examples(),
    );

    let total_cases = props.iter().map(|p| p.cases).sum();
    let failed_cases = props.iter().map(|p| p.failed).sum();
    SuiteReport {
        seed,
        sizes,
        passed: failed_cases == 0,
        total_cases,
        failed_cases,
        properties: props,
    }
}

/// The pairs `z/2, z/4` and `eta_1, eta_2` of the closing examples.
fn worked_examples() -> CaseResult {
    let half = MobiusMap::dilation(Complex64::new(0.5, 0.0)).expect("nonzero");
    let quarter = MobiusMap::dilation(Complex64::new(0.25, 0.0)).expect("nonzero");
    let radial = verify_point_maps(
        &PointMap::RadialSquare,
        &half.into(),
        &quarter.into(),
        &disk_samples(1000, 1.0),
        Execution::Sequential,
    );
    ensure(radial <= 1e-12, || {
        format!("radial square deviates by {radial:e}")
    })?;
    ensure(
        analytically_conjugate(&half, &quarter)
            .map_err(err)?
            .is_none(),
        || "z/2 and z/4 reported analytically conjugate".into(),
    )?;

    let (eta1, eta2) = translation_pair();
    let mut dev: f64 = 0.0;
    for (m, ratio) in [(eta1, 1.0 / 3.0), (eta2, 3.0 / 5.0)] {
        match normal_form(&m).map_err(err)?.form {
            NormalForm::Hyperbolic { ratio: got } => dev = dev.max((got - ratio).abs()),
            other => return Err(format!("{m} normal-forms to {other:?}")),
        }
    }
    ensure(dev <= 1e-12, || format!("dilation ratios off by {dev:e}"))?;
    let verdict = semicrossed_iso_verdict(&eta1, &eta2).map_err(err)?.verdict;
    ensure(verdict == IsoVerdict::NotIsomorphic, || {
        format!("verdict {verdict:?}")
    })?;

    let third = MobiusMap::dilation(Complex64::new(1.0 / 3.0, 0.0)).expect("nonzero");
    // the left half-plane side of the Cayley map: sample away from its pole at 1
    let samples: Vec<Complex64> = disk_samples(1000, 0.95);
    let cayley = verify_point_maps(
        &PointMap::Cayley,
        &eta1.into(),
        &third.into(),
        &samples,
        Execution::Sequential,
    );
    let t = real_translation(0.5);
    let s = real_translation(0.25);
    ensure(
        analytically_conjugate(&t, &s).map_err(err)?.is_none(),
        || "translations by 1/2 and 1/4 reported analytically conjugate".into(),
    )?;
    let self_dev =
        intertwining_deviation(&MobiusMap::identity(), &eta1, &eta1, Execution::Sequential);
    Ok(cayley.max(self_dev))
}

/// `eta_1(z) = (z - 1/2)/(1 - z/2)` and `eta_2(z) = (z - 1/4)/(1 - z/4)`.
pub fn translation_pair() -> (MobiusMap, MobiusMap) {
    (real_translation(0.5), real_translation(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteSizes {
        SuiteSizes {
            max_n: 5,
            oracle_pairs: 200,
            product_pairs: 50,
            pencil_cases: 50,
            elliptic_maps: 20,
            rotations: 10,
            norm_polys: 10,
            shift_systems: 2,
            misc_cases: 30,
        }
    }

    #[test]
    fn small_suite_passes() {
        let report = verify_suite(3, small(), Execution::Parallel);
        for p in &report.properties {
            assert!(p.ok(), "{} failed: {:?}", p.name, p.failure);
        }
        assert!(report.passed);
    }

    #[test]
    fn deterministic_across_strategies() {
        let a = serde_json::to_string(&verify_suite(11, small(), Execution::Parallel)).unwrap();
        let b = serde_json::to_string(&verify_suite(11, small(), Execution::Sequential)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_records_first_failure() {
        let prop = Property {
            name: "t",
            module: "t",
            statement: "",
            tolerance: 0.5,
        };
        let r = sweep(0, Execution::Sequential, prop, 4, |rng: &mut ChaCha8Rng| {
            let v: f64 = rng.random();
            if v < 0.0 {
                Err("never".into())
            } else {
                Ok(v)
            }
        });
        assert_eq!(r.passed + r.failed, 4);
        if let Some(f) = &r.failure {
            assert!(f.deviation.unwrap() > 0.5);
        }
        let nan = sweep(
            0,
            Execution::Sequential,
            Property {
                name: "n",
                module: "n",
                statement: "",
                tolerance: 1.0,
            },
            1,
            |_: &mut ChaCha8Rng| Ok(f64::NAN),
        );
        assert_eq!(nan.failed, 1);
    }
}
