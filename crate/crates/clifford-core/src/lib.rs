//! Finite-dimensional model of the spacetime spinor fiber.
//!
//! `S = S0 (+) S0` carries Clifford multiplication by spatial vectors, the timelike
//! endomorphism `tau`, the volume element `epsilon = nu tau` of the normal plane, the
//! positive Hermitian product and the indefinite pairing `(psi, phi) = <tau psi, phi>`.

pub mod error;
mod ops;
mod rep;
pub mod suite;

pub use error::{Error, Result};
pub use ops::{
    clifford_mul, epsilon_action, epsilon_for, hermitian, max_abs, pairings, rotation_from_epsilon,
    spinor_rotation, FiberVector, HyperbolicRotation,
};
pub use rep::{build_rep, BlockConvention, CliffordRep};

pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
pub type Spinor = nalgebra::DVector<num_complex::Complex64>;
pub use num_complex::Complex64;
