//! Builds a derivation for a plan by simulating it on states.
//!
//! A running state `w` starts at the initial state. Each action is framed
//! with the maps of `w` that its postcondition does not mention, and `w`
//! becomes the framed postcondition. The per-action derivations are chained
//! with composition, shrunk to the goal and weakened to the initial state.

use serde::Serialize;
use thiserror::Error;

use crate::logic::{instantiate, Derivation, InstantiateError, RuleCounts};
use crate::state::{is_valid, subtype_check};
use crate::syntax::{ActionInstance, Atom, Context, FormulaMap, State};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("no proof found by this strategy: the plan is empty")]
    EmptyPlan,
    #[error("no proof found by this strategy: the {0} state is not valid")]
    InvalidState(&'static str),
    #[error("no proof found by this strategy: action {index} {action}: {source}")]
    Instantiate {
        index: usize,
        action: ActionInstance,
        source: InstantiateError,
    },
    #[error("no proof found by this strategy: action {index} {action}: precondition atom {atom} is missing from the postcondition")]
    UnaugmentedSchema {
        index: usize,
        action: ActionInstance,
        atom: Atom,
    },
    #[error("no proof found by this strategy: action {index} {action}: precondition {missing} does not hold")]
    PreconditionUnsatisfied {
        index: usize,
        action: ActionInstance,
        missing: FormulaMap,
    },
    #[error("no proof found by this strategy: goal {missing} does not hold after the plan")]
    GoalNotReached { missing: FormulaMap },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub index: usize,
    pub action: String,
    pub pre: State,
    pub post: State,
    /// In the order the maps appear in `world_before`.
    pub frames: State,
    pub world_before: State,
    pub world_after: State,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GenerationTrace {
    pub steps: Vec<TraceStep>,
    pub counts: RuleCounts,
}

/// Runs the strategy over `actions` (0-based indices in errors).
pub fn generate_derivation(
    ctx: &Context,
    init: &State,
    goal: &State,
    actions: &[ActionInstance],
) -> Result<(Derivation, GenerationTrace), GenerationError> {
    if actions.is_empty() {
        return Err(GenerationError::EmptyPlan);
    }
    if !is_valid(init) {
        return Err(GenerationError::InvalidState("initial"));
    }
    if !is_valid(goal) {
        return Err(GenerationError::InvalidState("goal"));
    }

    let mut w = init.clone();
    let mut steps = Vec::with_capacity(actions.len());
    let mut chain: Option<Derivation> = None;
    let mut counts = RuleCounts::default();

    for (index, action) in actions.iter().enumerate() {
        let inst = instantiate(ctx, action).map_err(|source| GenerationError::Instantiate {
            index,
            action: action.clone(),
            source,
        })?;
        if let Some(atom) = inst.pre.atoms().find(|a| !inst.post.mentions(a)) {
            return Err(GenerationError::UnaugmentedSchema {
                index,
                action: action.clone(),
                atom: atom.clone(),
            });
        }
        let frames: State = w.iter().filter(|m| !inst.post.mentions(&m.atom)).cloned().collect();
        let required = inst.pre.clone().star(&frames);
        subtype_check(&w, &required).map_err(|missing| GenerationError::PreconditionUnsatisfied {
            index,
            action: action.clone(),
            missing,
        })?;

        let node = frames
            .iter()
            .fold(Derivation::apply_action(action.clone(), inst.sigma), |inner, m| {
                Derivation::frame(m.clone(), inner)
            });
        counts.apply_action += 1;
        counts.frame += frames.len();
        chain = Some(match chain {
            None => node,
            Some(left) => {
                counts.composition += 1;
                Derivation::composition(left, node)
            }
        });

        let next = inst.post.clone().star(&frames);
        steps.push(TraceStep {
            index,
            action: action.to_string(),
            pre: inst.pre,
            post: inst.post,
            frames,
            world_before: std::mem::replace(&mut w, next.clone()),
            world_after: next,
        });
    }

    subtype_check(&w, goal).map_err(|missing| GenerationError::GoalNotReached { missing })?;
    let body = chain.expect("plan is non-empty");
    let derivation = Derivation::weakening(init.clone(), Derivation::shrink(goal.clone(), body));
    counts.shrink = 1;
    counts.weakening = 1;
    Ok((derivation, GenerationTrace { steps, counts }))
}
