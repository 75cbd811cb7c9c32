//! Random planning instances and small-universe strategies shared by the
//! property tests and the acceptance harness.

#![allow(dead_code)]

use pcp::logic::instantiate;
use pcp::state::wf_world_member;
use pcp::syntax::{
    ActionInstance, ActionSchema, Atom, Constraint, Context, Formula, FormulaMap, Ident, Polarity, State, Term, World,
};
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub fn pol(b: bool) -> Polarity {
    if b {
        Polarity::Plus
    } else {
        Polarity::Minus
    }
}

/// Six ground atoms of mixed arity.
pub fn universe() -> Vec<Atom> {
    vec![
        Atom::ground("p", &[]),
        Atom::ground("q", &[]),
        Atom::ground("r", &["a"]),
        Atom::ground("r", &["b"]),
        Atom::ground("s", &["a", "b"]),
        Atom::ground("s", &["b", "a"]),
    ]
}

/// A valid state over [`universe`], in arbitrary order.
pub fn valid_state() -> impl Strategy<Value = State> {
    let n = universe().len();
    (subsequence((0..n).collect::<Vec<_>>(), 0..=n).prop_shuffle(), prop::collection::vec(any::<bool>(), n)).prop_map(
        |(idx, pols)| {
            let u = universe();
            idx.into_iter().map(|i| FormulaMap::new(u[i].clone(), pol(pols[i]))).collect()
        },
    )
}

/// A valid state `q` together with a reordered subset `p`, so `q <: p`.
pub fn state_with_supertype() -> impl Strategy<Value = (State, State)> {
    valid_state().prop_flat_map(|q| {
        let n = q.len();
        (Just(q), subsequence((0..n).collect::<Vec<_>>(), 0..=n).prop_shuffle())
            .prop_map(|(q, idx)| {
                let p = idx.iter().map(|&i| q.maps()[i].clone()).collect();
                (q, p)
            })
    })
}

pub fn formula_map() -> impl Strategy<Value = FormulaMap> {
    (0..universe().len(), any::<bool>()).prop_map(|(i, b)| FormulaMap::new(universe()[i].clone(), pol(b)))
}

pub fn world() -> impl Strategy<Value = World> {
    prop::collection::vec(any::<bool>(), universe().len())
        .prop_map(|bits| universe().into_iter().zip(bits).filter(|(_, b)| *b).map(|(a, _)| a).collect())
}

/// Every world over `atoms`.
pub fn all_worlds(atoms: &[Atom]) -> Vec<World> {
    (0u32..1 << atoms.len())
        .map(|bits| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Random formula of depth at most `depth` over `atoms`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[Atom], depth: usize) -> Formula {
    let a = atoms.choose(rng).unwrap().clone();
    if depth <= 1 {
        return if rng.random_bool(0.5) { Formula::Pos(a) } else { Formula::Neg(a) };
    }
    match rng.random_range(0..4) {
        0 => Formula::Pos(a),
        1 => Formula::Neg(a),
        _ => Formula::and(random_formula(rng, atoms, depth - 1), random_formula(rng, atoms, depth - 1)),
    }
}

pub fn formula_depth(f: &Formula) -> usize {
    match f {
        Formula::Pos(_) | Formula::Neg(_) => 1,
        Formula::And(l, r) => 1 + formula_depth(l).max(formula_depth(r)),
    }
}

/// A randomly generated domain with its ground-atom universe.
pub struct Instance {
    pub ctx: Context,
    pub constants: Vec<Ident>,
    pub atoms: Vec<Atom>,
}

fn ground_atoms(preds: &[(Ident, usize)], constants: &[Ident]) -> Vec<Atom> {
    let mut out = Vec::new();
    for (p, arity) in preds {
        let mut tuples: Vec<Vec<Ident>> = vec![Vec::new()];
        for _ in 0..*arity {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    constants.iter().map(move |c| {
                        let mut t = t.clone();
                        t.push(c.clone());
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            out.push(Atom {
                predicate: p.clone(),
                args: t.into_iter().map(Term::Const).collect(),
            });
        }
    }
    out
}

/// Domains whose ground-atom universe has at most `max_atoms` atoms.
/// Schemas are augmented, so every precondition atom occurs in the
/// postcondition.
pub fn random_instance<R: Rng>(rng: &mut R, max_atoms: usize) -> Instance {
    loop {
        let constants: Vec<Ident> = (0..rng.random_range(1..=3)).map(|i| Ident::new(format!("c{i}"))).collect();
        let preds: Vec<(Ident, usize)> = (0..rng.random_range(1..=4))
            .map(|i| (Ident::new(format!("p{i}")), rng.random_range(0..=2)))
            .collect();
        let atoms = ground_atoms(&preds, &constants);
        if atoms.is_empty() || atoms.len() > max_atoms {
            continue;
        }
        let mut ctx = Context::default();
        for (p, n) in &preds {
            ctx.predicates.insert(p.clone(), *n);
        }
        ctx.constants.extend(constants.iter().cloned());
        for s in 0..rng.random_range(1..=4) {
            let params: Vec<Ident> = (0..rng.random_range(0..=2)).map(|i| Ident::new(format!("x{i}"))).collect();
            let mut terms: Vec<Term> = params.iter().cloned().map(Term::Var).collect();
            terms.extend(constants.iter().take(1).cloned().map(Term::Const));
            let random_state = |rng: &mut R, size: usize| {
                let mut maps: Vec<FormulaMap> = Vec::new();
                for _ in 0..size {
                    let (p, n) = preds.choose(rng).unwrap();
                    let args: Vec<Term> = (0..*n).map(|_| terms.choose(rng).unwrap().clone()).collect();
                    let atom = Atom { predicate: p.clone(), args };
                    if !maps.iter().any(|m| m.atom == atom) {
                        maps.push(FormulaMap::new(atom, pol(rng.random_bool(0.5))));
                    }
                }
                maps
            };
            let (pre_size, post_size) = (rng.random_range(0..=3), rng.random_range(0..=3));
            let pre = random_state(rng, pre_size);
            let mut post = random_state(rng, post_size);
            for m in &pre {
                if !post.iter().any(|p| p.atom == m.atom) {
                    post.push(m.clone());
                }
            }
            let mut constraints = Vec::new();
            if params.len() == 2 && rng.random_bool(0.3) {
                constraints.push(Constraint::Neq(Term::Var(params[0].clone()), Term::Var(params[1].clone())));
            }
            let schema = ActionSchema {
                name: Ident::new(format!("act{s}")),
                params,
                constraints,
                pre: State::new(pre),
                post: State::new(post),
            };
            ctx.schemas.insert(schema.name.clone(), schema);
        }
        return Instance { ctx, constants, atoms };
    }
}

impl Instance {
    /// Every ground action whose instantiation succeeds.
    pub fn ground_actions(&self) -> Vec<ActionInstance> {
        let mut out = Vec::new();
        for s in self.ctx.schemas.values() {
            let mut tuples: Vec<Vec<Ident>> = vec![Vec::new()];
            for _ in &s.params {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        self.constants.iter().map(move |c| {
                            let mut t = t.clone();
                            t.push(c.clone());
                            t
                        })
                    })
                    .collect();
            }
            for t in tuples {
                let a = ActionInstance {
                    name: s.name.clone(),
                    args: t.into_iter().map(Term::Const).collect(),
                };
                if instantiate(&self.ctx, &a).is_ok() {
                    out.push(a);
                }
            }
        }
        out
    }

    /// A random valid state over the universe; `complete` maps every atom.
    pub fn random_state<R: Rng>(&self, rng: &mut R, complete: bool) -> State {
        let mut atoms = self.atoms.clone();
        atoms.shuffle(rng);
        let mut maps = Vec::new();
        for a in atoms {
            if complete || rng.random_bool(0.6) {
                maps.push(FormulaMap::new(a, pol(rng.random_bool(0.5))));
            }
        }
        State::new(maps)
    }

    /// A plan of up to `max_len` actions, each chosen so that its grounded
    /// precondition holds in the running state, which starts at `init`.
    pub fn applicable_plan<R: Rng>(&self, rng: &mut R, init: &State, max_len: usize) -> Vec<ActionInstance> {
        let actions = self.ground_actions();
        let mut w = init.clone();
        let mut plan = Vec::new();
        for _ in 0..max_len {
            let ok: Vec<&ActionInstance> = actions
                .iter()
                .filter(|a| {
                    let inst = instantiate(&self.ctx, a).unwrap();
                    inst.pre.iter().all(|m| w.contains(m))
                })
                .collect();
            let Some(a) = ok.choose(rng) else { break };
            let inst = instantiate(&self.ctx, a).unwrap();
            let frames: Vec<FormulaMap> = w.iter().filter(|m| !inst.post.mentions(&m.atom)).cloned().collect();
            w = inst.post.star(&State::new(frames));
            plan.push((*a).clone());
        }
        plan
    }

    /// Up to `n` worlds in ⟨w_state⟩; all of them when the universe has at
    /// most `exhaustive_below` atoms.
    pub fn worlds_of<R: Rng>(&self, rng: &mut R, state: &State, n: usize, exhaustive_below: usize) -> Vec<World> {
        if self.atoms.len() <= exhaustive_below {
            return all_worlds(&self.atoms).into_iter().filter(|w| wf_world_member(w, state)).collect();
        }
        (0..n)
            .map(|_| {
                self.atoms
                    .iter()
                    .filter(|a| match state.iter().find(|m| &m.atom == *a) {
                        Some(m) => m.polarity == Polarity::Plus,
                        None => rng.random_bool(0.5),
                    })
                    .cloned()
                    .collect()
            })
            .collect()
    }
}
