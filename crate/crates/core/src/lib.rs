//! Selberg zeta functions and zeta-regularized determinants of the Laplacian
//! for cofinite Kleinian groups, computed from conjugacy-class data.

pub mod error;
pub mod geometry;
pub mod group_model;
pub mod kernels;
pub mod quad;
pub mod special;
pub mod spectral_functions;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub mod lattice_siegel;
pub mod summation;
pub mod trace;
