//! Proof-carrying plans: a small program logic for STRIPS-style planning.
//!
//! A plan is checked by building a derivation in the logic and then running
//! the independent proof checker over it.

pub mod logic;
pub mod pddl;
pub mod proofgen;
pub mod semantics;
pub mod state;
pub mod syntax;
