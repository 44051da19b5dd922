//! Sparse linear algebra for the implicit step: compressed-row matrices,
//! zero-fill incomplete LU and right-preconditioned restarted GMRES.
//! `dense` holds the small direct solver used by the local interface systems.

// unused only when a dev-dependency enables num-traits/std
#[allow(unused_imports)]
use num_traits::Float;

pub mod csr;
pub mod dense;
pub mod gmres;
pub mod ilu;

pub use csr::{CsrBuilder, CsrMatrix};
pub use gmres::{gmres, GmresConfig, GmresOutcome};
pub use ilu::Ilu0;

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
