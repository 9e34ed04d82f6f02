//! Supermanifold volume arithmetic: Grassmann algebras, supermatrices and the
//! Berezinian, Gamma and Barnes G functions, and the closed-form volumes of
//! superspheres, complex projective superspaces, Stiefel and Grassmann
//! supermanifolds and the unitary supergroup.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod grassmann;
pub mod scalar;
pub mod special;
pub mod superlinalg;
pub mod volumes;

pub use grassmann::{
    ConjugationRule, Generators, GrassmannElement, GrassmannError, Pairing, Parity, Side,
    CONJUGATION_RULE, MAX_GENERATORS,
};
pub use scalar::{Real, Scalar};
pub use special::{
    barnes_g, double_factorial, gamma, log_gamma, reciprocal_gamma, AnalyticValue, SpecialError,
};
pub use superlinalg::{sqrt_berezinian_volume_density, LinalgError, SuperMatrix};
pub use volumes::{
    cp_volume, dimension_of, gaussian_factor, grassmannian_volume, index_of, normalized_volume,
    sphere_volume, stiefel_volume, stiefel_volume_product, unitary_volume, volume, Family,
    ManifoldSpec, NormalizedFamily, SuperDimension, VolumeError, VolumeValue,
};
