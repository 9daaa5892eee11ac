//! Restrictions applied to a set of component functions and all their linear combinations.

use serde::Serialize;

use crate::bf::TruthTable;
use crate::error::{Error, Result};
use crate::search::constraints::{evaluate_constraints, ConstraintSystem};

/// `⊕_{i: bit i of mask} components[i]`.
pub fn linear_combination(components: &[TruthTable], mask: usize) -> Result<TruthTable> {
    let first = components.first().ok_or(Error::Empty("component list"))?;
    let mut acc = TruthTable::zero(first.n())?;
    for (i, c) in components.iter().enumerate() {
        first.check_same_n(c)?;
        if (mask >> i) & 1 == 1 {
            acc = &acc ^ c;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCheck {
    /// Nonzero combination masks whose function fails the constraints, ascending.
    pub failing_combinations: Vec<usize>,
}

impl ComponentCheck {
    pub fn pass(&self) -> bool {
        self.failing_combinations.is_empty()
    }
}

pub(crate) fn check_component_shape(components: &[TruthTable]) -> Result<usize> {
    let first = components.first().ok_or(Error::Empty("component list"))?;
    let n = first.n();
    for c in components {
        first.check_same_n(c)?;
    }
    if components.len() > n {
        return Err(Error::InvalidValue(format!(
            "{} components exceed the {n} input variables",
            components.len()
        )));
    }
    Ok(n)
}

/// Evaluates `cs` on every nonzero linear combination of `components`.
pub fn check_component_constraints(
    components: &[TruthTable],
    cs: &ConstraintSystem,
) -> Result<ComponentCheck> {
    check_component_shape(components)?;
    let mut failing = Vec::new();
    for mask in 1..1usize << components.len() {
        let g = linear_combination(components, mask)?;
        if !evaluate_constraints(&g, cs)?.pass() {
            failing.push(mask);
        }
    }
    Ok(ComponentCheck {
        failing_combinations: failing,
    })
}
