//! Numerical toolkit for fractional integral operators with homogeneous
//! degree-zero kernels: operator evaluation by dyadic-shell quadrature, the
//! companion maximal operators, the hierarchy of function-space norms
//! (Lebesgue, weak Lebesgue, Morrey, weak Morrey, BMO, L^p log L Luxemburg)
//! and an empirical verification harness for the boundedness theorems,
//! pointwise estimates, embeddings and bilinear inequalities they satisfy.

pub mod error;
pub mod funcspace;
pub mod geom;
pub mod inequalities;
pub mod kernel;
pub mod norms;
pub mod operators;
pub mod zoo;

pub use error::{Error, Result};
