//! High-precision q-Meixner functions and Jackson q-integrals.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: configurable-precision complex scalars with power-of-q scaling,
//! - [`qseries`]: q-shifted factorials, θ-functions and `rφs` series,
//! - [`qcalculus`]: Jackson q-integrals, the q-derivative and lattice points,
//! - [`meixner`]: the weight, polynomial families and q-Meixner functions,
//! - [`spectral`]: the difference operator, Casorati determinants, Green kernel and residues,
//! - [`verify`]: identity suites, configuration parsing and reports,
//! - [`cli`]: the command-line front end.

pub mod error;
pub mod scalar;
pub mod qseries;
pub mod qcalculus;
pub mod meixner;
pub mod spectral;
pub mod verify;
pub mod cli;

mod ops;

pub use error::{Error, Result};
pub use qseries::QContext;
pub use scalar::{Precision, ScaledValue};
