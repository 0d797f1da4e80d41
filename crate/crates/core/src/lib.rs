//! Inverse-square Schrödinger operators on the half-line.

// `!(x > 0.0)` is how NaN parameters are rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod kernels;
pub mod operators;
pub mod oracle;
pub mod quad;
pub mod scattering;
pub mod transforms;
pub mod validation;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operators::{ExtendedParam, OperatorSpec};
pub use specfun::{Order, SeriesPolicy, Sign};
