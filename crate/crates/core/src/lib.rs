//! Conjugacy algebras of dynamical systems, made computable.
//!
//! * [`dynsys`]: finite systems, orbit structure, conjugacy with witnesses.
//! * [`skewpoly`]: the skew polynomial algebra under `U f = (f . eta) U`.
//! * [`charspace`]: characters and the analytic-disc catalog.
//! * [`repr`]: truncated shift models and 2x2 nest representations.
//! * [`diskmaps`]: Möbius self-maps of the disk and their classification.
//! * [`suite`]: seeded property sweeps over all of the above.

pub mod charspace;
pub mod diskmaps;
pub mod dynsys;
pub mod error;
pub mod json;
pub mod par;
pub mod random;
pub mod repr;
pub mod skewpoly;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use par::Execution;
