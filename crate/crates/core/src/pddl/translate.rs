use indexmap::IndexMap;
use thiserror::Error;

use super::ast::{DomainAst, Literal, ProblemAst};
use crate::semantics::normalize_formula;
use crate::syntax::{ActionSchema, Atom, Constraint, Context, Formula, FormulaMap, Ident, Polarity, State, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("{place}: unknown predicate `{predicate}`")]
    UnknownPredicate { place: String, predicate: Ident },
    #[error("{place}: predicate `{predicate}` takes {expected} arguments, got {got}")]
    ArityMismatch {
        place: String,
        predicate: Ident,
        expected: usize,
        got: usize,
    },
    #[error("action `{action}`: variable ?{var} is not a parameter")]
    VariableNotInParams { action: Ident, var: Ident },
    #[error("action `{action}`: parameter ?{param} is declared twice")]
    DuplicateParameter { action: Ident, param: Ident },
    #[error("action `{action}` is declared twice")]
    DuplicateAction { action: Ident },
    #[error("predicate `{predicate}` is declared twice")]
    DuplicatePredicate { predicate: Ident },
    #[error("action `{action}`: equality is not allowed in an effect")]
    EqualityInEffect { action: Ident },
    #[error("action `{action}`: {atom} is both required and forbidden in the {part}")]
    InconsistentSchema { action: Ident, part: &'static str, atom: Atom },
    #[error("{place}: unknown object `{object}`")]
    UnknownObject { place: String, object: Ident },
    #[error("goal: equality literals are not supported")]
    EqualityInGoal,
    #[error("goal: {0} is both required and forbidden")]
    ContradictoryGoal(Atom),
}

#[derive(Clone, Copy, Debug)]
pub struct TranslateOptions {
    /// Copy precondition maps that the effect leaves untouched into the
    /// postcondition. Only tests turn this off.
    pub augment_effects: bool,
}

impl Default for TranslateOptions {
    fn default() -> Self {
        TranslateOptions { augment_effects: true }
    }
}

fn check_atom(predicates: &IndexMap<Ident, usize>, atom: &Atom, place: impl Fn() -> String) -> Result<(), TranslateError> {
    match predicates.get(&atom.predicate) {
        None => Err(TranslateError::UnknownPredicate {
            place: place(),
            predicate: atom.predicate.clone(),
        }),
        Some(&n) if n != atom.args.len() => Err(TranslateError::ArityMismatch {
            place: place(),
            predicate: atom.predicate.clone(),
            expected: n,
            got: atom.args.len(),
        }),
        Some(_) => Ok(()),
    }
}

/// Appends `map`, merging an identical earlier map and rejecting one of the
/// opposite polarity.
fn push_map(state: &mut Vec<FormulaMap>, map: FormulaMap) -> Result<(), Atom> {
    match state.iter().find(|m| m.atom == map.atom) {
        Some(m) if m.polarity == map.polarity => Ok(()),
        Some(_) => Err(map.atom),
        None => {
            state.push(map);
            Ok(())
        }
    }
}

pub fn translate_domain(d: &DomainAst, opts: TranslateOptions) -> Result<Context, TranslateError> {
    let mut ctx = Context::default();
    for (p, n) in &d.predicates {
        if ctx.predicates.insert(p.clone(), *n).is_some() {
            return Err(TranslateError::DuplicatePredicate { predicate: p.clone() });
        }
    }
    ctx.constants.extend(d.constants.iter().cloned());

    for a in &d.actions {
        for (i, p) in a.params.iter().enumerate() {
            if a.params[..i].contains(p) {
                return Err(TranslateError::DuplicateParameter {
                    action: a.name.clone(),
                    param: p.clone(),
                });
            }
        }
        let check_term = |t: &Term| match t {
            Term::Var(v) if !a.params.contains(v) => Err(TranslateError::VariableNotInParams {
                action: a.name.clone(),
                var: v.clone(),
            }),
            _ => Ok(()),
        };
        let check_literal_atom = |atom: &Atom, part: &str| {
            check_atom(&ctx.predicates, atom, || format!("action `{}` {part}", a.name))?;
            atom.args.iter().try_for_each(check_term)
        };
        let inconsistent = |part, atom| TranslateError::InconsistentSchema {
            action: a.name.clone(),
            part,
            atom,
        };

        let mut constraints = Vec::new();
        let mut pre = Vec::new();
        for l in &a.precondition {
            match l {
                Literal::Eq(x, y) | Literal::NotEq(x, y) => {
                    check_term(x)?;
                    check_term(y)?;
                    constraints.push(match l {
                        Literal::Eq(..) => Constraint::Eq(x.clone(), y.clone()),
                        _ => Constraint::Neq(x.clone(), y.clone()),
                    });
                }
                Literal::Atom(atom) | Literal::NotAtom(atom) => {
                    check_literal_atom(atom, "precondition")?;
                    let z = if matches!(l, Literal::Atom(_)) { Polarity::Plus } else { Polarity::Minus };
                    push_map(&mut pre, FormulaMap::new(atom.clone(), z)).map_err(|x| inconsistent("precondition", x))?;
                }
            }
        }
        let mut post = Vec::new();
        for l in &a.effect {
            match l {
                Literal::Eq(..) | Literal::NotEq(..) => {
                    return Err(TranslateError::EqualityInEffect { action: a.name.clone() })
                }
                Literal::Atom(atom) | Literal::NotAtom(atom) => {
                    check_literal_atom(atom, "effect")?;
                    let z = if matches!(l, Literal::Atom(_)) { Polarity::Plus } else { Polarity::Minus };
                    push_map(&mut post, FormulaMap::new(atom.clone(), z)).map_err(|x| inconsistent("effect", x))?;
                }
            }
        }
        if opts.augment_effects {
            for m in &pre {
                if !post.iter().any(|p| p.atom == m.atom) {
                    post.push(m.clone());
                }
            }
        }

        let constants = constraints
            .iter()
            .flat_map(Constraint::terms)
            .chain(pre.iter().chain(&post).flat_map(|m| &m.atom.args));
        for t in constants {
            if let Term::Const(c) = t {
                ctx.constants.insert(c.clone());
            }
        }

        let schema = ActionSchema {
            name: a.name.clone(),
            params: a.params.clone(),
            constraints,
            pre: State::new(pre),
            post: State::new(post),
        };
        if ctx.schemas.insert(a.name.clone(), schema).is_some() {
            return Err(TranslateError::DuplicateAction { action: a.name.clone() });
        }
    }
    Ok(ctx)
}

/// Odometer enumeration of `objects^arity`, last position fastest.
fn tuples(objects: &[Ident], arity: usize) -> Vec<Vec<Ident>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                objects.iter().map(move |o| {
                    let mut t = prefix.clone();
                    t.push(o.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Returns the initial and goal states of a problem.
///
/// With `closed_world`, every ground atom over the declared predicates and
/// known objects that is absent from `:init` is added with polarity `-`.
pub fn translate_problem(p: &ProblemAst, ctx: &Context, closed_world: bool) -> Result<(State, State), TranslateError> {
    let mut objects: Vec<Ident> = Vec::new();
    for o in p.objects.iter().chain(&ctx.constants) {
        if !objects.contains(o) {
            objects.push(o.clone());
        }
    }
    let check = |atom: &Atom, place: &str| {
        check_atom(&ctx.predicates, atom, || place.to_string())?;
        for t in &atom.args {
            if let Term::Const(c) = t {
                if !objects.contains(c) {
                    return Err(TranslateError::UnknownObject {
                        place: place.to_string(),
                        object: c.clone(),
                    });
                }
            }
        }
        Ok(())
    };

    let mut init = Vec::new();
    for atom in &p.init {
        check(atom, "init")?;
        // `:init` is a set, so repeated facts collapse
        push_map(&mut init, FormulaMap::plus(atom.clone())).expect("init maps are all positive");
    }
    if closed_world {
        let present: std::collections::HashSet<Atom> = p.init.iter().cloned().collect();
        for (pred, &arity) in &ctx.predicates {
            for args in tuples(&objects, arity) {
                let atom = Atom {
                    predicate: pred.clone(),
                    args: args.into_iter().map(Term::Const).collect(),
                };
                if !present.contains(&atom) {
                    init.push(FormulaMap::minus(atom));
                }
            }
        }
    }

    let mut literals: Vec<&Literal> = Vec::new();
    for l in &p.goal {
        match l {
            Literal::Atom(a) | Literal::NotAtom(a) => check(a, "goal")?,
            Literal::Eq(..) | Literal::NotEq(..) => return Err(TranslateError::EqualityInGoal),
        }
        // repeated literals would otherwise normalise to an invalid state
        if !literals.contains(&l) {
            literals.push(l);
        }
    }
    let formula = Formula::conjunction(literals.into_iter().map(|l| match l {
        Literal::Atom(a) => Formula::Pos(a.clone()),
        Literal::NotAtom(a) => Formula::Neg(a.clone()),
        _ => unreachable!(),
    }));
    let goal = match formula {
        None => State::emp(),
        Some(f) => normalize_formula(Polarity::Plus, &f, State::emp()).map_err(|e| TranslateError::ContradictoryGoal(e.0))?,
    };
    Ok((State::new(init), goal))
}
