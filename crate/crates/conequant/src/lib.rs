//! Exact symbolic algebra of differential operators on a quadratic cone,
//! together with a floating-point spectral layer for the radial Schrödinger
//! family on the half cones.
//!
//! The symbolic side works over the Gaussian rationals with arbitrary
//! precision and never touches floating point; the numerical side converts
//! only at matrix assembly time.

// Indexed loops over square matrices and structure-constant tables read
// better than iterator chains here.
#![allow(clippy::needless_range_loop)]

pub mod conelie;
pub mod dsl;
pub mod qlinalg;
pub mod radial;
pub mod report;
pub mod scalar;
pub mod sl2pencil;
pub mod spectral;
pub mod weyl;

pub use scalar::Scalar;
pub use weyl::{MultiIndex, Polynomial, QuadraticForm, WeylElement};
