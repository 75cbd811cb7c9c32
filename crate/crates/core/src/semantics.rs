//! Possible-world semantics: satisfaction, formula normalisation, action
//! handlers and plan evaluation.

use thiserror::Error;

use crate::logic::{instantiate, InstantiateError};
use crate::state::is_valid;
use crate::syntax::{ActionInstance, Atom, Context, Formula, FormulaMap, Plan, PlanStep, Polarity, State, World};

/// `w ⊨_z F`
pub fn satisfies(w: &World, z: Polarity, formula: &Formula) -> bool {
    match formula {
        Formula::And(l, r) => satisfies(w, z, l) && satisfies(w, z, r),
        Formula::Neg(a) => satisfies(w, z.negate(), &Formula::Pos(a.clone())),
        Formula::Pos(a) => match z {
            Polarity::Plus => w.contains(a),
            Polarity::Minus => !w.contains(a),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula maps {0} to both + and -")]
pub struct ContradictoryFormula(pub Atom);

/// Unfolds `formula` onto `state`: a conjunction normalises its left part
/// first and then its right part onto the result, negation flips the
/// polarity, and an atom is placed in front of the state.
pub fn normalize_onto(z: Polarity, formula: &Formula, state: State) -> State {
    match formula {
        Formula::And(l, r) => normalize_onto(z, r, normalize_onto(z, l, state)),
        Formula::Neg(a) => normalize_onto(z.negate(), &Formula::Pos(a.clone()), state),
        Formula::Pos(a) => {
            let mut state = state;
            state.prepend(FormulaMap::new(a.clone(), z));
            state
        }
    }
}

/// [`normalize_onto`] followed by a validity check. Formulas such as
/// `A ∧ ¬A` have no valid normal form.
pub fn normalize_formula(z: Polarity, formula: &Formula, state: State) -> Result<State, ContradictoryFormula> {
    let out = normalize_onto(z, formula, state);
    if is_valid(&out) {
        Ok(out)
    } else {
        let mut seen = std::collections::HashSet::new();
        let dup = out.atoms().find(|a| !seen.insert(*a)).expect("invalid state has a repeated atom");
        Err(ContradictoryFormula(dup.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HandlerError {
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error("out of energy")]
    OutOfEnergy,
}

/// Maps an action and a world to the next world.
///
/// Handlers take `&mut self` so that per-run bookkeeping (such as an energy
/// budget) can live in the handler value itself.
pub trait ActionHandler {
    fn apply(&mut self, action: &ActionInstance, world: &World) -> Result<World, HandlerError>;
}

impl<H: ActionHandler + ?Sized> ActionHandler for &mut H {
    fn apply(&mut self, action: &ActionInstance, world: &World) -> Result<World, HandlerError> {
        (**self).apply(action, world)
    }
}

/// Applies the grounded postcondition of an action: atoms mapped to `-` are
/// deleted, then atoms mapped to `+` are inserted.
#[derive(Clone, Copy, Debug)]
pub struct CanonicalHandler<'a> {
    ctx: &'a Context,
}

impl<'a> CanonicalHandler<'a> {
    pub fn new(ctx: &'a Context) -> Self {
        CanonicalHandler { ctx }
    }
}

pub fn canonical_handler(ctx: &Context) -> CanonicalHandler<'_> {
    CanonicalHandler::new(ctx)
}

impl ActionHandler for CanonicalHandler<'_> {
    fn apply(&mut self, action: &ActionInstance, world: &World) -> Result<World, HandlerError> {
        let post = instantiate(self.ctx, action)?.post;
        let mut next = world.clone();
        for m in post.iter().filter(|m| m.polarity == Polarity::Minus) {
            next.remove(&m.atom);
        }
        for m in post.iter().filter(|m| m.polarity == Polarity::Plus) {
            next.insert(m.atom.clone());
        }
        Ok(next)
    }
}

/// Wraps a handler with a budget of actions; each application costs one.
#[derive(Clone, Debug)]
pub struct EnergyHandler<H> {
    base: H,
    remaining: usize,
}

impl<H> EnergyHandler<H> {
    pub fn new(base: H, budget: usize) -> Self {
        EnergyHandler { base, remaining: budget }
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }
}

pub fn energy_handler<H: ActionHandler>(base: H, budget: usize) -> EnergyHandler<H> {
    EnergyHandler::new(base, budget)
}

impl<H: ActionHandler> ActionHandler for EnergyHandler<H> {
    fn apply(&mut self, action: &ActionInstance, world: &World) -> Result<World, HandlerError> {
        if self.remaining == 0 {
            return Err(HandlerError::OutOfEnergy);
        }
        self.remaining -= 1;
        self.base.apply(action, world)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {position} {action}: {source}")]
pub struct EvalError {
    /// 1-based index into the flattened plan.
    pub position: usize,
    pub action: ActionInstance,
    pub source: HandlerError,
}

/// Runs `plan` from `world`. `shrink` leaves the world unchanged; the first
/// handler error stops evaluation.
pub fn evaluate_plan<H: ActionHandler + ?Sized>(handler: &mut H, plan: &Plan, world: &World) -> Result<World, EvalError> {
    let mut w = world.clone();
    for (i, step) in plan.flatten().into_iter().enumerate() {
        if let PlanStep::Act(action) = step {
            w = handler.apply(&action, &w).map_err(|source| EvalError {
                position: i + 1,
                action,
                source,
            })?;
        }
    }
    Ok(w)
}
