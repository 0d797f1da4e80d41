//! The operator families H_m, H_{m,κ}, H_0^ν: parameters, symmetries and
//! point spectrum.

mod param;
mod spec;
mod spectrum;

pub use param::ExtendedParam;
pub use spec::{
    adjoint, blowup, canonicalize, classify, dilation_transform, varsigma, Classification,
    OperatorSpec, EXCEPTIONAL_TOL,
};
pub use spectrum::{
    count_eigenvalues, eigenvalues, lemma_count, EigenCount, EigenvalueRecord, Window,
    NEAR_BOUNDARY,
};
