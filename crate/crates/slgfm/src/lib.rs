//! Manufactured test problems, convergence studies, file formats and the
//! command line for [`slgfm_core`].

pub mod cases;
pub mod config;
pub mod io;
pub mod study;
pub mod validate;
