//! Restriction systems and the constrained search for Boolean functions.

mod climb;
mod components;
mod constraints;

pub use climb::{
    gradient_descent_search, incremental_walsh_update, stream_seed, FailureReason, Sampling,
    SearchConfig, SearchFailure, SearchOutcome,
};
pub(crate) use components::check_component_shape;
pub use components::{check_component_constraints, linear_combination, ComponentCheck};
pub use constraints::{evaluate_constraints, Bound, ConstraintCheck, ConstraintSystem, Violation};
