//! Validity, the subtyping order `<:`, the override operator `⊔` and
//! well-formed-world membership.

use std::collections::{HashMap, HashSet};

use crate::syntax::{FormulaMap, Polarity, State, World};

/// True iff all atoms of `state` are pairwise distinct.
pub fn is_valid(state: &State) -> bool {
    let mut seen = HashSet::with_capacity(state.len());
    state.atoms().all(|a| seen.insert(a))
}

/// Evidence that `S' <: S`: for each map of `S`, in order, its index in `S'`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubtypeWitness {
    pub indices: Vec<usize>,
}

/// Decides `sub <: sup`: every map of `sup` must occur, with the same
/// polarity, somewhere in `sub`. On failure returns the first map of `sup`
/// (left to right) that `sub` lacks.
pub fn subtype_check(sub: &State, sup: &State) -> Result<SubtypeWitness, FormulaMap> {
    if sub.len() <= 16 {
        return sup
            .iter()
            .map(|map| sub.iter().position(|m| m == map).ok_or_else(|| map.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map(|indices| SubtypeWitness { indices });
    }
    let mut index: HashMap<&FormulaMap, usize> = HashMap::with_capacity(sub.len());
    for (i, map) in sub.iter().enumerate() {
        index.entry(map).or_insert(i);
    }
    sup.iter()
        .map(|map| index.get(map).copied().ok_or_else(|| map.clone()))
        .collect::<Result<Vec<_>, _>>()
        .map(|indices| SubtypeWitness { indices })
}

pub fn is_subtype(sub: &State, sup: &State) -> bool {
    subtype_check(sub, sup).is_ok()
}

/// State equality as mutual subtyping.
pub fn state_equiv(p: &State, q: &State) -> bool {
    is_subtype(p, q) && is_subtype(q, p)
}

/// `p ⊔ q`: maps of `q` win. Each map of `q` in turn is placed in front of
/// what remains of the accumulator after removing maps on the same atom.
pub fn override_state(p: &State, q: &State) -> State {
    let mut acc: Vec<FormulaMap> = p.maps().to_vec();
    for map in q {
        acc.retain(|m| m.atom != map.atom);
        acc.insert(0, map.clone());
    }
    State::new(acc)
}

/// Membership of `w` in the well-formed worlds of `state`.
pub fn wf_world_member(w: &World, state: &State) -> bool {
    state.iter().all(|m| match m.polarity {
        Polarity::Plus => w.contains(&m.atom),
        Polarity::Minus => !w.contains(&m.atom),
    })
}
