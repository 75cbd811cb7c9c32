use crate::syntax::{Atom, Ident, Term};

pub const SUPPORTED_REQUIREMENTS: [&str; 3] = [":strips", ":equality", ":negative-preconditions"];

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Literal {
    Atom(Atom),
    NotAtom(Atom),
    Eq(Term, Term),
    NotEq(Term, Term),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActionAst {
    pub name: Ident,
    pub params: Vec<Ident>,
    pub precondition: Vec<Literal>,
    pub effect: Vec<Literal>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DomainAst {
    pub name: Ident,
    pub requirements: Vec<String>,
    /// Untyped `(:constants ...)`, shared by every problem of the domain.
    pub constants: Vec<Ident>,
    pub predicates: Vec<(Ident, usize)>,
    pub actions: Vec<ActionAst>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProblemAst {
    pub name: Ident,
    pub domain_name: Ident,
    pub objects: Vec<Ident>,
    pub init: Vec<Atom>,
    pub goal: Vec<Literal>,
}
