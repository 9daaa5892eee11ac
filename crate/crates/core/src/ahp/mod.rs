//! Pairwise-comparison hierarchies for electing a final variant.

mod decision;
mod matrix;
mod priority;

pub use decision::{
    score_measured, synthesize, CriteriaSource, Criterion, CriterionResult, CriterionSource,
    DecisionProblem, DecisionSpec, Direction, MetricSource, RankedAlternative, Ranking, Scoring,
    PROPERTY_METRICS,
};
pub use matrix::{parse_judgment, ComparisonMatrix, Judgment};
pub use priority::{
    consistency_index, consistency_ratio, priority_vector, PriorityVector, CONSISTENCY_THRESHOLD,
    MAX_RATED_DIMENSION, POWER_MAX_ITERATIONS, POWER_TOLERANCE, RANDOM_INDEX,
};
