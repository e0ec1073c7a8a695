//! Graded operator calculus for heat kernels of Dirac-type operators.
//!
//! Clifford and exterior algebras, grading filtrations on differential
//! operators, the heat-coefficient recursion on polynomial jets, Mehler's
//! formula, leading-order asymptotics, and brute-force spectral oracles.

pub mod algebra;
pub mod asymptotics;
pub mod graded_ops;
pub mod heat_jets;
pub mod mehler;
pub mod oracle;
pub mod error;
pub mod format;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
