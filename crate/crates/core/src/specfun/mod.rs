//! Special functions: complex gamma/digamma and the Bessel family for dimension 1.

mod bessel;
mod gamma;

pub use bessel::{
    bessel_i, bessel_j, bessel_k, hankel_pm, neumann, Order, SeriesPolicy, Sign,
};
pub use gamma::{digamma, gamma, ln_gamma, rgamma, EULER_GAMMA};
