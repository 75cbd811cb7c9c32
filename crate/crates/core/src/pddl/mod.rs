//! The STRIPS fragment of PDDL: untyped domains with equality and negative
//! preconditions, problems, and sequential plans.

use thiserror::Error;

pub mod ast;
mod parse;
mod print;
pub mod sexpr;
mod translate;

pub use ast::{ActionAst, DomainAst, Literal, ProblemAst};
pub use parse::{parse_domain, parse_plan, parse_problem};
pub use print::{print_domain, print_literal, print_plan, print_problem};
pub use translate::{translate_domain, translate_problem, TranslateError, TranslateOptions};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: unsupported requirement `{requirement}`")]
    UnsupportedRequirement { line: usize, col: usize, requirement: String },
    #[error("plan contains no actions")]
    EmptyPlan,
}

impl ParseError {
    pub(crate) fn syntax(pos: sexpr::Pos, expected: &[&str], found: String) -> Self {
        ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }
}
