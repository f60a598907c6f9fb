//! Concrete representations: truncated shift models on `l^2` and the
//! families of 2x2 nest representations.

pub mod analytic;
pub mod nest;
pub mod truncated;

pub use analytic::{
    build_fixed_derivative, norm_estimate_disk, rep_matrix_disk, DiskCharacter, DiskSkewPoly,
    FixedDerivativeRep, HolFn, Jet,
};
pub use nest::{build_offfixed, build_pencil, Mat2, NestRep};
pub use truncated::{
    norm_estimate, operator_norm, shift_power_norms, spectral_radius_estimate, CMatrix, Convention,
    RepMatrix, TruncatedRep, DEFAULT_TRUNC,
};
