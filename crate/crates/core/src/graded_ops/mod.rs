//! Differential operators with word-algebra coefficients: normal-ordered
//! composition, grading functionals, top-order parts and the model-operator
//! reduction.

mod grading;
mod jet;
mod multi_index;
mod operator;

pub use grading::GradingWeights;
pub use jet::{JetKey, JetSection, ParamValue, ScalarJet};
pub use multi_index::MultiIndex;
pub use operator::{CliffordOperator, ExteriorOperator, GradedOperator, MonomialKey, OperatorMonomial};

#[cfg(test)]
mod tests;
