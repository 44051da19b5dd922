//! Finite-difference solver for convection-diffusion equations
//!
//! ```text
//! rho (u_t + V . grad u) - div(mu grad u) = f     in Omega \ Gamma_t
//! [u] = 0,  [mu du/dn] = b                         on Gamma_t
//! ```
//!
//! on a uniform Cartesian grid, with the moving interface `Gamma_t` tracked by
//! a level-set function. The convective term is treated semi-Lagrangian with a
//! jump-aware interpolation built on a second-order ghost fluid method, and the
//! diffusive term implicitly with BDF1/BDF2 and a Shortley-Weller Laplacian.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the test problems
//! and the command line live in the `slgfm` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod assemble;
pub mod driver;
pub mod error;
pub mod extend;
pub mod gfm;
pub mod grid;
pub mod interp;
pub mod levelset;
pub mod linalg;
pub mod problem;
pub mod semilag;

pub use error::{Error, Result};
pub use grid::{Grid2D, NodeField, VectorField};
pub use levelset::{InterfaceGeometry, LevelSetField, Region};
