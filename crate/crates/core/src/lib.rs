//! Free energy of the dilute Bose gas: scattering, Neumann-box kernels,
//! Bogoliubov box free energies, Fock-space oracles and the LHY formula.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bogoliubov;
pub mod error;
pub mod fit;
pub mod fock;
pub mod neumann_box;
pub mod quadrature;
pub mod scattering;
pub mod thermo;
pub mod verify;

pub use error::{Error, Result};
