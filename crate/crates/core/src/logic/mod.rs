//! Constraint normalisation, derivation trees and the proof checker.

mod check;
mod constraints;
mod derivation;
pub mod json;

pub use check::{check_derivation, instantiate, CheckError, CheckErrorKind, InstantiateError, Instance, TreePath};
pub use constraints::{norm_constraints, NonGroundConstraint, Norm};
pub use derivation::{Derivation, Judgement, Rule, RuleCounts};
