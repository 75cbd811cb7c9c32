//! The independent derivation checker.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::constraints::{norm_constraints, Norm};
use super::derivation::{Derivation, Judgement, Rule};
use crate::state::{is_valid, subtype_check};
use crate::syntax::{
    substitute_state, ActionInstance, Atom, Constraint, Context, FormulaMap, GroundingError, Ident,
    Plan, State, Substitution, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("unknown action `{0}`")]
    UnknownAction(Ident),
    #[error("action `{name}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        name: Ident,
        expected: usize,
        got: usize,
    },
    #[error("action {0} has a non-ground argument")]
    NonGroundArgument(ActionInstance),
    #[error("constraint {0} does not hold")]
    ConstraintViolated(Constraint),
    #[error("constraint {0} is not ground after substitution")]
    NonGroundConstraint(Constraint),
    #[error("variable ?{0} is not bound by the substitution")]
    UnboundVariable(Ident),
    #[error("inconsistent instantiation: {0} is mapped to both + and -")]
    InconsistentInstantiation(Atom),
}

impl From<GroundingError> for InstantiateError {
    fn from(e: GroundingError) -> Self {
        match e {
            GroundingError::UnboundVariable(v) => InstantiateError::UnboundVariable(v),
            GroundingError::InconsistentInstantiation(a) => InstantiateError::InconsistentInstantiation(a),
        }
    }
}

/// A schema grounded at a particular action.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Instance {
    pub sigma: Substitution,
    pub pre: State,
    pub post: State,
}

/// Looks up the schema for `action`, binds its parameters positionally and
/// grounds the constraints and both states.
pub fn instantiate(ctx: &Context, action: &ActionInstance) -> Result<Instance, InstantiateError> {
    let schema = ctx
        .schema(&action.name)
        .ok_or_else(|| InstantiateError::UnknownAction(action.name.clone()))?;
    if schema.params.len() != action.args.len() {
        return Err(InstantiateError::ArityMismatch {
            name: action.name.clone(),
            expected: schema.params.len(),
            got: action.args.len(),
        });
    }
    let mut sigma = Substitution::new();
    for (param, arg) in schema.params.iter().zip(&action.args) {
        match arg {
            Term::Const(c) => sigma.bind(param.clone(), c.clone()),
            Term::Var(_) => return Err(InstantiateError::NonGroundArgument(action.clone())),
        }
    }
    let constraints = schema
        .constraints
        .iter()
        .map(|c| c.apply(&sigma))
        .collect::<Result<Vec<_>, _>>()?;
    match norm_constraints(&constraints) {
        Ok(Norm::Top) => {}
        Ok(Norm::Bottom(c)) => return Err(InstantiateError::ConstraintViolated(c)),
        Err(e) => return Err(InstantiateError::NonGroundConstraint(e.0)),
    }
    let pre = substitute_state(&schema.pre, &sigma)?;
    let post = substitute_state(&schema.post, &sigma)?;
    debug_assert!(is_valid(&pre) && is_valid(&post));
    Ok(Instance { sigma, pre, post })
}

/// Location of a node, as the sequence of child edges from the root.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TreePath(Vec<&'static str>);

impl TreePath {
    fn child(&self, edge: &'static str) -> TreePath {
        let mut segments = self.0.clone();
        segments.push(edge);
        TreePath(segments)
    }

    pub fn segments(&self) -> &[&'static str] {
        &self.0
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        // collapse runs of the same edge, frame chains get long
        let mut i = 0;
        while i < self.0.len() {
            let edge = self.0[i];
            let run = self.0[i..].iter().take_while(|e| **e == edge).count();
            if run > 1 {
                write!(f, "/{edge}*{run}")?;
            } else {
                write!(f, "/{edge}")?;
            }
            i += run;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckErrorKind {
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error("recorded substitution does not match the positional binding of the arguments")]
    SubstitutionMismatch,
    #[error("frame may only wrap a single action, found {0}")]
    FrameOverNonAction(Rule),
    #[error("framed atom of {0} already occurs in the precondition")]
    FrameAtomInPre(FormulaMap),
    #[error("framed atom of {0} already occurs in the postcondition")]
    FrameAtomInPost(FormulaMap),
    #[error("new precondition is not a subtype of the inner precondition: missing {0}")]
    WeakeningNotSubtype(FormulaMap),
    #[error("inner postcondition is not a subtype of the new postcondition: missing {0}")]
    ShrinkNotSubtype(FormulaMap),
    #[error("left postcondition is not a subtype of the right precondition: missing {0}")]
    CompositionNotSubtype(FormulaMap),
    #[error("{0} state is not valid: {1}")]
    InvalidState(&'static str, State),
}

/// A violated side condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} at {path}: {kind}")]
pub struct CheckError {
    pub rule: Rule,
    pub path: TreePath,
    pub kind: CheckErrorKind,
}

/// Checks every side condition of `derivation` and returns its conclusion.
/// All violations found are reported, each with the path of its node.
pub fn check_derivation(ctx: &Context, derivation: &Derivation) -> Result<Judgement, Vec<CheckError>> {
    let mut checker = Checker {
        ctx,
        errors: Vec::new(),
    };
    let judgement = checker.node(derivation, TreePath::default());
    match judgement {
        Some(j) if checker.errors.is_empty() => Ok(j),
        _ => {
            debug_assert!(!checker.errors.is_empty());
            Err(checker.errors)
        }
    }
}

struct Checker<'a> {
    ctx: &'a Context,
    errors: Vec<CheckError>,
}

impl Checker<'_> {
    fn fail(&mut self, rule: Rule, path: &TreePath, kind: CheckErrorKind) {
        self.errors.push(CheckError {
            rule,
            path: path.clone(),
            kind,
        });
    }

    fn require_valid(&mut self, rule: Rule, path: &TreePath, which: &'static str, state: &State) -> bool {
        if is_valid(state) {
            true
        } else {
            self.fail(rule, path, CheckErrorKind::InvalidState(which, state.clone()));
            false
        }
    }

    /// `None` means the conclusion is undefined; an error has been recorded.
    fn node(&mut self, d: &Derivation, path: TreePath) -> Option<Judgement> {
        match d {
            Derivation::ApplyAction { action, sigma } => self.apply_action(action, sigma, &path),
            Derivation::Frame { .. } => self.frame_chain(d, path),
            Derivation::Weakening { pre, inner } => {
                let inner = self.node(inner, path.child("inner"));
                if !self.require_valid(Rule::Weakening, &path, "weakened precondition", pre) {
                    return None;
                }
                let inner = inner?;
                if let Err(missing) = subtype_check(pre, &inner.pre) {
                    self.fail(Rule::Weakening, &path, CheckErrorKind::WeakeningNotSubtype(missing));
                }
                Some(Judgement {
                    pre: pre.clone(),
                    ..inner
                })
            }
            Derivation::Shrink { post, inner } => {
                let inner = self.node(inner, path.child("inner"));
                if !self.require_valid(Rule::Shrink, &path, "shrunk postcondition", post) {
                    return None;
                }
                let inner = inner?;
                if let Err(missing) = subtype_check(&inner.post, post) {
                    self.fail(Rule::Shrink, &path, CheckErrorKind::ShrinkNotSubtype(missing));
                }
                Some(Judgement {
                    pre: inner.pre,
                    post: post.clone(),
                    plan: Plan::seq(inner.plan, Plan::Shrink),
                })
            }
            Derivation::Composition { left, right } => {
                let left = self.node(left, path.child("left"));
                let right = self.node(right, path.child("right"));
                let (left, right) = (left?, right?);
                if let Err(missing) = subtype_check(&left.post, &right.pre) {
                    self.fail(Rule::Composition, &path, CheckErrorKind::CompositionNotSubtype(missing));
                }
                Some(Judgement {
                    pre: left.pre,
                    post: right.post,
                    plan: Plan::seq(left.plan, right.plan),
                })
            }
        }
    }

    fn apply_action(&mut self, action: &ActionInstance, sigma: &Substitution, path: &TreePath) -> Option<Judgement> {
        match instantiate(self.ctx, action) {
            Ok(instance) => {
                if &instance.sigma != sigma {
                    self.fail(Rule::ApplyAction, path, CheckErrorKind::SubstitutionMismatch);
                }
                Some(Judgement {
                    pre: instance.pre,
                    post: instance.post,
                    plan: Plan::Act(action.clone()),
                })
            }
            Err(e) => {
                self.fail(Rule::ApplyAction, path, e.into());
                None
            }
        }
    }

    /// Frames are only allowed in chains `Frame(.., Frame(.., ApplyAction))`.
    /// The chain is walked iteratively since it can be as long as the state.
    fn frame_chain(&mut self, top: &Derivation, path: TreePath) -> Option<Judgement> {
        let mut frames: Vec<(&FormulaMap, TreePath)> = Vec::new();
        let mut node = top;
        let mut node_path = path;
        while let Derivation::Frame { map, inner } = node {
            let child = node_path.child("inner");
            frames.push((map, node_path));
            node = inner;
            node_path = child;
        }
        let base = match node {
            Derivation::ApplyAction { action, sigma } => self.apply_action(action, sigma, &node_path),
            other => {
                let (_, frame_path) = frames.last().expect("chain starts at a frame");
                let frame_path = frame_path.clone();
                self.fail(Rule::Frame, &frame_path, CheckErrorKind::FrameOverNonAction(other.rule()));
                // still report problems inside the offending subtree
                self.node(other, node_path);
                return None;
            }
        };
        let mut judgement = base?;
        let mut pre_atoms: HashSet<Atom> = judgement.pre.atoms().cloned().collect();
        let mut post_atoms: HashSet<Atom> = judgement.post.atoms().cloned().collect();
        let mut ok = true;
        for (map, frame_path) in frames.into_iter().rev() {
            if pre_atoms.contains(&map.atom) {
                self.fail(Rule::Frame, &frame_path, CheckErrorKind::FrameAtomInPre(map.clone()));
                ok = false;
            }
            if post_atoms.contains(&map.atom) {
                self.fail(Rule::Frame, &frame_path, CheckErrorKind::FrameAtomInPost(map.clone()));
                ok = false;
            }
            pre_atoms.insert(map.atom.clone());
            post_atoms.insert(map.atom.clone());
            judgement.pre.push(map.clone());
            judgement.post.push(map.clone());
        }
        ok.then_some(judgement)
    }
}
