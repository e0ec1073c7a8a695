//! Clifford and exterior algebras with twist-matrix coefficients.

mod element;
mod form;
mod matrix;
pub mod spin;
pub mod word;

pub use element::{exterior_symbol, CliffordElement, ExteriorElement, WordAlgebra};
pub use form::FormScalar;
pub use matrix::Mat;
pub use word::{Clifford, Exterior, ProductRule, Word};

#[cfg(test)]
mod tests;
