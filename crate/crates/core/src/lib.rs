//! Band functions of translationally invariant magnetic Laplacians in the plane.
//!
//! The operator `(D_x)² + (D_y − a(x))²` with `a' = b` decomposes under the
//! Fourier transform in `y` into the fiber family `L_ξ = D² + (ξ − a(x))²`.
//! This crate discretizes the fibers, traces their eigenvalue branches, and
//! implements semiclassical and scattering checks on the resulting spectra.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fiber;
pub mod field;
pub mod quadrature;
pub mod scattering;
pub mod semiclassical;
pub mod spectral;

pub use error::{Error, Result, Side};
pub use field::{CoreModel, ExtendedReal, FieldKind, FieldProfile, ProfileSpec};
