//! Leading terms: the local index density, the Bergman-type diagonal term for
//! high tensor powers of a line bundle, and the odd-dimensional trace limit.

mod bergman;
mod index;
mod odd;

pub use bergman::{
    bergman_chain, bergman_leading, bergman_operator, clifford_action, clifford_of_form, exterior_mul,
    interior_mul, BergmanChain, ComplexCurvature,
};
pub use index::{
    curvature_forms, exterior_to_forms, forms_to_exterior, index_density, index_density_from_model,
    integrate_index, purified_operator, recognize_model, twist_forms, IndexDensity, IndexDensityInput,
};
pub use odd::{integrate_odd, odd_chain, odd_leading, odd_operator, odd_trace_density, OddChain, OddCurvature};
