//! Two-cone analysis of the single-layer classifier: membership values per
//! hyperplane, the multinomial law of hyperplane configurations, Monte-Carlo
//! estimates of the correct-classification probability, the explicit lower
//! bound, and the supporting counting and special-function identities.

pub mod bound;
pub mod cones;
pub mod counting;
pub mod simulate;
pub mod special;

pub use bound::{excluded_mass, theorem_bound, BoundResult};
pub use cones::{
    case_probabilities, compositions, cone_membership, event_probability, EventConfig,
    HyperplaneCase,
};
pub use counting::{
    count_terms_equivalent, count_w1, count_w1_bruteforce, count_w2_formula,
    max_trinomial_constrained,
};
pub use simulate::{simulate_classification_probability, simulate_conditional, SimEstimate};
pub use special::{erf, erfi, mgf_uniform_square, ExponentSign};
