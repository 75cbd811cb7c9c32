//! Accepted derivations are sound for the canonical handler, and formula
//! normalisation agrees with satisfaction.

mod common;

use common::*;
use pcp::logic::{check_derivation, Derivation};
use pcp::proofgen::generate_derivation;
use pcp::semantics::{canonical_handler, evaluate_plan, normalize_formula, satisfies};
use pcp::state::wf_world_member;
use pcp::syntax::{Atom, Polarity, State};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(500)
}

/// Applies one random edit to a derivation: flip a frame polarity, drop a
/// frame, or shuffle a weakening state.
fn mutate<R: Rng>(rng: &mut R, d: &Derivation) -> Derivation {
    fn go<R: Rng>(rng: &mut R, d: &Derivation, hit: &mut bool) -> Derivation {
        let here = !*hit && rng.random_bool(0.2);
        match d {
            Derivation::Frame { map, inner } if here => {
                *hit = true;
                if rng.random_bool(0.5) {
                    let mut m = map.clone();
                    m.polarity = m.polarity.negate();
                    Derivation::frame(m, go(rng, inner, hit))
                } else {
                    go(rng, inner, hit)
                }
            }
            Derivation::Frame { map, inner } => Derivation::frame(map.clone(), go(rng, inner, hit)),
            Derivation::Weakening { pre, inner } => {
                let mut maps = pre.maps().to_vec();
                if here {
                    *hit = true;
                    maps.shuffle(rng);
                    maps.truncate(rng.random_range(0..=maps.len()));
                }
                Derivation::weakening(State::new(maps), go(rng, inner, hit))
            }
            Derivation::Shrink { post, inner } => Derivation::shrink(post.clone(), go(rng, inner, hit)),
            Derivation::Composition { left, right } => {
                let l = go(rng, left, hit);
                Derivation::composition(l, go(rng, right, hit))
            }
            Derivation::ApplyAction { .. } => d.clone(),
        }
    }
    go(rng, d, &mut false)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generated_derivations_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 12);
        let complete = rng.random_bool(0.5);
        let init = inst.random_state(&mut rng, complete);
        let plan = inst.applicable_plan(&mut rng, &init, 6);
        prop_assume!(!plan.is_empty());

        // the goal is whatever the running state ends with, thinned out
        let mut w = init.clone();
        for a in &plan {
            let g = pcp::logic::instantiate(&inst.ctx, a).unwrap();
            let frames: State = w.iter().filter(|m| !g.post.mentions(&m.atom)).cloned().collect();
            w = g.post.star(&frames);
        }
        let goal: State = w.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();

        let (d, trace) = generate_derivation(&inst.ctx, &init, &goal, &plan).unwrap();
        prop_assert_eq!(trace.counts, d.rule_counts());
        let j = check_derivation(&inst.ctx, &d).unwrap();
        for candidate in [d.clone(), mutate(&mut rng, &d)] {
            let Ok(j) = check_derivation(&inst.ctx, &candidate) else { continue };
            for world in inst.worlds_of(&mut rng, &j.pre, 10, 4) {
                let out = evaluate_plan(&mut canonical_handler(&inst.ctx), &j.plan, &world).unwrap();
                prop_assert!(wf_world_member(&out, &j.post), "{} from {:?}", j, world);
            }
        }
        prop_assert_eq!(j.pre, init);
    }

    #[test]
    fn goals_given_as_formulas_are_reached(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 12);
        let init = inst.random_state(&mut rng, true);
        let plan = inst.applicable_plan(&mut rng, &init, 5);
        prop_assume!(!plan.is_empty());
        let world = inst.worlds_of(&mut rng, &init, 1, 0).remove(0);
        let last = evaluate_plan(&mut canonical_handler(&inst.ctx), &pcp::syntax::Plan::from_actions(&plan).unwrap(), &world).unwrap();

        // a goal formula that the executed plan satisfies, built from literals
        let lits: Vec<pcp::syntax::Formula> = inst
            .atoms
            .iter()
            .filter(|_| rng.random_bool(0.4))
            .map(|a| if last.contains(a) { pcp::syntax::Formula::Pos(a.clone()) } else { pcp::syntax::Formula::Neg(a.clone()) })
            .collect();
        let Some(g) = pcp::syntax::Formula::conjunction(lits) else { return Ok(()) };
        let goal = normalize_formula(Polarity::Plus, &g, State::emp()).unwrap();

        if let Ok((d, _)) = generate_derivation(&inst.ctx, &init, &goal, &plan) {
            let j = check_derivation(&inst.ctx, &d).unwrap();
            for w in inst.worlds_of(&mut rng, &j.pre, 10, 4) {
                let out = evaluate_plan(&mut canonical_handler(&inst.ctx), &j.plan, &w).unwrap();
                prop_assert!(satisfies(&out, Polarity::Plus, &g));
            }
        }
    }
}

#[test]
fn normalisation_agrees_with_satisfaction() {
    let atoms: Vec<Atom> = ["w", "x", "y", "z"].iter().map(|n| Atom::ground(n, &[])).collect();
    let worlds = all_worlds(&atoms);
    assert_eq!(worlds.len(), 16);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut normalised = 0;
    for _ in 0..600 {
        let f = random_formula(&mut rng, &atoms, 4);
        assert!(formula_depth(&f) <= 4);
        for z in [Polarity::Plus, Polarity::Minus] {
            // normalisation fails on formulas that mention an atom twice
            let Ok(s) = normalize_formula(z, &f, State::emp()) else { continue };
            normalised += 1;
            for w in &worlds {
                assert_eq!(satisfies(w, z, &f), wf_world_member(w, &s), "{f} under {z}");
            }
        }
    }
    assert!(normalised > 200, "only {normalised} formulas normalised");
}
