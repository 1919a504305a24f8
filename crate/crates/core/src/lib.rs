//! Determinantal averaging: combining independently subsampled
//! inverse-matrix estimates with weights proportional to the determinant of
//! each local matrix, which removes the inversion bias of plain averaging.
//!
//! The crate provides the estimator itself ([`averaging`]), a simulator for
//! distributed Newton steps ([`newton`]) and distributed precision-matrix
//! statistics ([`uq`]), and an exact enumeration engine ([`oracle`]) that
//! checks the underlying expectation identities on small instances.

pub mod averaging;
pub mod cli;
pub mod dataio;
mod error;
pub mod linalg;
pub mod newton;
pub mod objective;
pub mod oracle;
pub mod sketch;
pub mod uq;

pub use error::{Error, Result};
