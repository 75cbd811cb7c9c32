use std::fmt;

use serde::Serialize;

use crate::syntax::{ActionInstance, FormulaMap, Plan, State, Substitution};

/// A proof tree built from the five rules.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Derivation {
    ApplyAction {
        action: ActionInstance,
        sigma: Substitution,
    },
    Frame {
        map: FormulaMap,
        inner: Box<Derivation>,
    },
    Weakening {
        pre: State,
        inner: Box<Derivation>,
    },
    Shrink {
        post: State,
        inner: Box<Derivation>,
    },
    Composition {
        left: Box<Derivation>,
        right: Box<Derivation>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rule {
    ApplyAction,
    Frame,
    Weakening,
    Shrink,
    Composition,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::ApplyAction => "applyAction",
            Rule::Frame => "frame",
            Rule::Weakening => "weakening",
            Rule::Shrink => "shrink",
            Rule::Composition => "composition",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of rule applications of each kind in a derivation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleCounts {
    pub apply_action: usize,
    pub frame: usize,
    pub weakening: usize,
    pub shrink: usize,
    pub composition: usize,
}

impl RuleCounts {
    pub fn total(&self) -> usize {
        self.apply_action + self.frame + self.weakening + self.shrink + self.composition
    }
}

impl Derivation {
    pub fn apply_action(action: ActionInstance, sigma: Substitution) -> Self {
        Derivation::ApplyAction { action, sigma }
    }

    pub fn frame(map: FormulaMap, inner: Derivation) -> Self {
        Derivation::Frame {
            map,
            inner: Box::new(inner),
        }
    }

    pub fn weakening(pre: State, inner: Derivation) -> Self {
        Derivation::Weakening {
            pre,
            inner: Box::new(inner),
        }
    }

    pub fn shrink(post: State, inner: Derivation) -> Self {
        Derivation::Shrink {
            post,
            inner: Box::new(inner),
        }
    }

    pub fn composition(left: Derivation, right: Derivation) -> Self {
        Derivation::Composition {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn rule(&self) -> Rule {
        match self {
            Derivation::ApplyAction { .. } => Rule::ApplyAction,
            Derivation::Frame { .. } => Rule::Frame,
            Derivation::Weakening { .. } => Rule::Weakening,
            Derivation::Shrink { .. } => Rule::Shrink,
            Derivation::Composition { .. } => Rule::Composition,
        }
    }

    pub fn rule_counts(&self) -> RuleCounts {
        let mut counts = RuleCounts::default();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                Derivation::ApplyAction { .. } => counts.apply_action += 1,
                Derivation::Frame { inner, .. } => {
                    counts.frame += 1;
                    stack.push(inner);
                }
                Derivation::Weakening { inner, .. } => {
                    counts.weakening += 1;
                    stack.push(inner);
                }
                Derivation::Shrink { inner, .. } => {
                    counts.shrink += 1;
                    stack.push(inner);
                }
                Derivation::Composition { left, right } => {
                    counts.composition += 1;
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        counts
    }

    /// The plan a derivation certifies, reconstructed from its shape alone.
    pub fn plan(&self) -> Plan {
        let mut node = self;
        loop {
            match node {
                Derivation::Frame { inner, .. } | Derivation::Weakening { inner, .. } => node = inner,
                Derivation::ApplyAction { action, .. } => return Plan::Act(action.clone()),
                Derivation::Shrink { inner, .. } => return Plan::seq(inner.plan(), Plan::Shrink),
                Derivation::Composition { left, right } => return Plan::seq(left.plan(), right.plan()),
            }
        }
    }
}

/// `Γ ⊢ {pre} ↝ {post} | plan`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Judgement {
    pub pre: State,
    pub post: State,
    pub plan: Plan,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} ↝ {{{}}} | {}", self.pre, self.post, self.plan)
    }
}
