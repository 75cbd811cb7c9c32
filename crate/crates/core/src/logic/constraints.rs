use thiserror::Error;

use crate::syntax::Constraint;

/// Outcome of normalising a ground constraint list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Norm {
    Top,
    /// Carries the first constraint that failed.
    Bottom(Constraint),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("constraint {0} is not ground")]
pub struct NonGroundConstraint(pub Constraint);

/// Walks the list left to right: `t = t1` continues iff the terms are
/// syntactically equal, `t ≠ t1` continues iff they differ.
pub fn norm_constraints(constraints: &[Constraint]) -> Result<Norm, NonGroundConstraint> {
    for c in constraints {
        if !c.terms().iter().all(|t| t.is_ground()) {
            return Err(NonGroundConstraint(c.clone()));
        }
        let holds = match c {
            Constraint::Eq(l, r) => l == r,
            Constraint::Neq(l, r) => l != r,
        };
        if !holds {
            return Ok(Norm::Bottom(c.clone()));
        }
    }
    Ok(Norm::Top)
}
