//! Shared vocabulary: terms, atoms, polarities, states, constraints, actions,
//! plans, contexts, worlds and ground formulae.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A case-insensitive identifier, stored in lower case.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(String);

impl Ident {
    /// Panics on an empty name; use [`Ident::try_new`] for untrusted input.
    pub fn new(name: impl AsRef<str>) -> Self {
        Self::try_new(name).expect("identifiers must be non-empty")
    }

    pub fn try_new(name: impl AsRef<str>) -> Option<Self> {
        let name = name.as_ref();
        if name.is_empty() {
            None
        } else {
            Some(Ident(name.to_lowercase()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Ident),
    Const(Ident),
}

impl Term {
    pub fn var(name: impl AsRef<str>) -> Self {
        Term::Var(Ident::new(name))
    }

    pub fn constant(name: impl AsRef<str>) -> Self {
        Term::Const(Ident::new(name))
    }

    /// Reads `?x` as a variable and anything else as a constant.
    pub fn parse(text: &str) -> Option<Self> {
        match text.strip_prefix('?') {
            Some(rest) => Ident::try_new(rest).map(Term::Var),
            None => Ident::try_new(text).map(Term::Const),
        }
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }

    pub fn apply(&self, sigma: &Substitution) -> Result<Term, GroundingError> {
        match self {
            Term::Const(_) => Ok(self.clone()),
            Term::Var(v) => sigma
                .get(v)
                .map(|c| Term::Const(c.clone()))
                .ok_or_else(|| GroundingError::UnboundVariable(v.clone())),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Term::parse(&text).ok_or_else(|| serde::de::Error::custom("empty term"))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub predicate: Ident,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl AsRef<str>, args: Vec<Term>) -> Self {
        Atom {
            predicate: Ident::new(predicate),
            args,
        }
    }

    /// Builds a ground atom from constant names.
    pub fn ground(predicate: impl AsRef<str>, args: &[&str]) -> Self {
        Atom::new(predicate, args.iter().map(Term::constant).collect())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Ident> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }

    pub fn apply(&self, sigma: &Substitution) -> Result<Atom, GroundingError> {
        Ok(Atom {
            predicate: self.predicate.clone(),
            args: self
                .args
                .iter()
                .map(|t| t.apply(sigma))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for arg in &self.args {
            write!(f, " {arg}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    pub fn negate(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::Plus => "+",
            Polarity::Minus => "-",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `A ↦ z`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FormulaMap {
    pub atom: Atom,
    pub polarity: Polarity,
}

impl FormulaMap {
    pub fn new(atom: Atom, polarity: Polarity) -> Self {
        FormulaMap { atom, polarity }
    }

    pub fn plus(atom: Atom) -> Self {
        FormulaMap::new(atom, Polarity::Plus)
    }

    pub fn minus(atom: Atom) -> Self {
        FormulaMap::new(atom, Polarity::Minus)
    }
}

impl fmt::Display for FormulaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ↦ {}", self.atom, self.polarity)
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    pred: String,
    args: Vec<Term>,
    polarity: String,
}

impl Serialize for FormulaMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MapRepr {
            pred: self.atom.predicate.to_string(),
            args: self.atom.args.clone(),
            polarity: self.polarity.symbol().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormulaMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MapRepr::deserialize(d)?;
        let predicate = Ident::try_new(&repr.pred).ok_or_else(|| D::Error::custom("empty predicate"))?;
        let polarity = match repr.polarity.as_str() {
            "+" => Polarity::Plus,
            "-" => Polarity::Minus,
            other => return Err(D::Error::custom(format!("unknown polarity {other:?}"))),
        };
        Ok(FormulaMap::new(
            Atom {
                predicate,
                args: repr.args,
            },
            polarity,
        ))
    }
}

/// An ordered list of formula maps; `emp` is the empty list.
///
/// Construction never deduplicates atoms, so a `State` may be invalid. Use
/// [`crate::state::is_valid`] to check.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct State(Vec<FormulaMap>);

impl State {
    pub fn emp() -> Self {
        State(Vec::new())
    }

    pub fn new(maps: Vec<FormulaMap>) -> Self {
        State(maps)
    }

    pub fn maps(&self) -> &[FormulaMap] {
        &self.0
    }

    pub fn into_maps(self) -> Vec<FormulaMap> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FormulaMap> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self * A ↦ z`
    pub fn push(&mut self, map: FormulaMap) {
        self.0.push(map);
    }

    /// `A ↦ z * self`
    pub fn prepend(&mut self, map: FormulaMap) {
        self.0.insert(0, map);
    }

    /// `self * other`
    pub fn star(mut self, other: &State) -> State {
        self.0.extend(other.0.iter().cloned());
        self
    }

    pub fn contains(&self, map: &FormulaMap) -> bool {
        self.0.contains(map)
    }

    pub fn mentions(&self, atom: &Atom) -> bool {
        self.0.iter().any(|m| &m.atom == atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter().map(|m| &m.atom)
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(|m| m.atom.is_ground())
    }
}

impl FromIterator<FormulaMap> for State {
    fn from_iter<I: IntoIterator<Item = FormulaMap>>(iter: I) -> Self {
        State(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a State {
    type Item = &'a FormulaMap;
    type IntoIter = std::slice::Iter<'a, FormulaMap>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("emp");
        }
        for (i, map) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "({map})")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Constraint {
    Eq(Term, Term),
    Neq(Term, Term),
}

impl Constraint {
    pub fn apply(&self, sigma: &Substitution) -> Result<Constraint, GroundingError> {
        Ok(match self {
            Constraint::Eq(l, r) => Constraint::Eq(l.apply(sigma)?, r.apply(sigma)?),
            Constraint::Neq(l, r) => Constraint::Neq(l.apply(sigma)?, r.apply(sigma)?),
        })
    }

    pub fn terms(&self) -> [&Term; 2] {
        match self {
            Constraint::Eq(l, r) | Constraint::Neq(l, r) => [l, r],
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Eq(l, r) => write!(f, "{l} = {r}"),
            Constraint::Neq(l, r) => write!(f, "{l} ≠ {r}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ActionInstance {
    pub name: Ident,
    pub args: Vec<Term>,
}

impl ActionInstance {
    pub fn new(name: impl AsRef<str>, args: Vec<Term>) -> Self {
        ActionInstance {
            name: Ident::new(name),
            args,
        }
    }

    pub fn ground(name: impl AsRef<str>, args: &[&str]) -> Self {
        ActionInstance::new(name, args.iter().map(Term::constant).collect())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }
}

impl fmt::Display for ActionInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for arg in &self.args {
            write!(f, " {arg}")?;
        }
        f.write_str(")")
    }
}

/// One element of a flattened plan.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PlanStep {
    Act(ActionInstance),
    Shrink,
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanStep::Act(a) => a.fmt(f),
            PlanStep::Shrink => f.write_str("shrink"),
        }
    }
}

/// A plan tree. Equality compares flattened sequences, so it does not depend
/// on how `Seq` nodes associate.
#[derive(Clone, Debug)]
pub enum Plan {
    Shrink,
    Act(ActionInstance),
    Seq(Box<Plan>, Box<Plan>),
}

impl Plan {
    pub fn seq(first: Plan, second: Plan) -> Plan {
        Plan::Seq(Box::new(first), Box::new(second))
    }

    /// Left-nested chain of actions. Returns `None` for an empty slice.
    pub fn from_actions(actions: &[ActionInstance]) -> Option<Plan> {
        let mut iter = actions.iter().cloned().map(Plan::Act);
        let first = iter.next()?;
        Some(iter.fold(first, Plan::seq))
    }

    pub fn flatten(&self) -> Vec<PlanStep> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                Plan::Shrink => out.push(PlanStep::Shrink),
                Plan::Act(a) => out.push(PlanStep::Act(a.clone())),
                Plan::Seq(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }

    pub fn actions(&self) -> Vec<ActionInstance> {
        self.flatten()
            .into_iter()
            .filter_map(|s| match s {
                PlanStep::Act(a) => Some(a),
                PlanStep::Shrink => None,
            })
            .collect()
    }
}

impl PartialEq for Plan {
    fn eq(&self, other: &Self) -> bool {
        self.flatten() == other.flatten()
    }
}

impl Eq for Plan {}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.flatten().iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

/// `φ(x̄); {P(x̄)} ↝ {Q(x̄)} | α x̄`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActionSchema {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub constraints: Vec<Constraint>,
    pub pre: State,
    pub post: State,
}

impl ActionSchema {
    /// Variables used in constraints or states that are not parameters.
    pub fn unbound_vars(&self) -> BTreeSet<Ident> {
        let constraint_vars = self
            .constraints
            .iter()
            .flat_map(|c| c.terms())
            .filter_map(|t| match t {
                Term::Var(v) => Some(v),
                Term::Const(_) => None,
            });
        let state_vars = self
            .pre
            .iter()
            .chain(self.post.iter())
            .flat_map(|m| m.atom.vars());
        constraint_vars
            .chain(state_vars)
            .filter(|v| !self.params.contains(v))
            .cloned()
            .collect()
    }
}

/// The planning context Γ.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Context {
    pub schemas: IndexMap<Ident, ActionSchema>,
    pub predicates: IndexMap<Ident, usize>,
    pub constants: BTreeSet<Ident>,
}

impl Context {
    pub fn schema(&self, name: &Ident) -> Option<&ActionSchema> {
        self.schemas.get(name)
    }
}

/// A ground substitution σ from variable names to constants.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Substitution {
    bindings: BTreeMap<Ident, Ident>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: Ident, value: Ident) {
        self.bindings.insert(var, value);
    }

    pub fn get(&self, var: &Ident) -> Option<&Ident> {
        self.bindings.get(var)
    }

    pub fn bindings(&self) -> &BTreeMap<Ident, Ident> {
        &self.bindings
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl FromIterator<(Ident, Ident)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Ident, Ident)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

/// A finite set of ground atoms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct World {
    atoms: BTreeSet<Atom>,
}

impl World {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    /// Panics if `atom` is not ground.
    pub fn insert(&mut self, atom: Atom) -> bool {
        assert!(atom.is_ground(), "worlds hold ground atoms only: {atom}");
        self.atoms.insert(atom)
    }

    pub fn remove(&mut self, atom: &Atom) -> bool {
        self.atoms.remove(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms rendered as text and sorted lexicographically.
    pub fn sorted_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        lines.sort();
        lines
    }
}

impl FromIterator<Atom> for World {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut w = World::new();
        for atom in iter {
            w.insert(atom);
        }
        w
    }
}

/// Ground PDDL formula: `A | ¬A | F ∧ F1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Pos(Atom),
    Neg(Atom),
    And(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Box::new(left), Box::new(right))
    }

    /// Left-nested conjunction; `None` when `parts` is empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Pos(a) | Formula::Neg(a) => a.is_ground(),
            Formula::And(l, r) => l.is_ground() && r.is_ground(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pos(a) => a.fmt(f),
            Formula::Neg(a) => write!(f, "¬{a}"),
            Formula::And(l, r) => write!(f, "({l} ∧ {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingError {
    #[error("variable ?{0} is not bound by the substitution")]
    UnboundVariable(Ident),
    #[error("instantiation maps {0} to both + and -")]
    InconsistentInstantiation(Atom),
}

/// Grounds `state` under `sigma`. Equal-polarity duplicates produced by the
/// substitution collapse to their first occurrence; conflicting polarities are
/// an error.
pub fn substitute_state(state: &State, sigma: &Substitution) -> Result<State, GroundingError> {
    let mut out: Vec<FormulaMap> = Vec::with_capacity(state.len());
    for map in state {
        let atom = map.atom.apply(sigma)?;
        match out.iter().find(|m| m.atom == atom) {
            Some(existing) if existing.polarity == map.polarity => {}
            Some(_) => return Err(GroundingError::InconsistentInstantiation(atom)),
            None => out.push(FormulaMap::new(atom, map.polarity)),
        }
    }
    Ok(State(out))
}
