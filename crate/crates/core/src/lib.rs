//! Bogoliubov coefficients, Fock-space states and entanglement measures for
//! uniformly accelerated scalar and Dirac fields, plus accelerating Gaussian
//! wave packets and their two-body Schmidt numbers.

pub mod bogoliubov;
pub mod curves;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod packets;
pub mod quadrature;

pub use error::{Error, Result};

/// Default truncation tolerance for the bosonic series.
pub const DEFAULT_EPSILON: f64 = 1e-12;
