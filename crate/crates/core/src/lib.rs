//! Numerical toolkit for convex harmonic mappings of the unit disk.

// Range checks are written `!(x < bound)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod mappings;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod series;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
