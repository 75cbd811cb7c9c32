//! The in-repo benchmark domains: proof shape, executor agreement and
//! deterministic output.

use std::path::PathBuf;

use pcp::logic::{check_derivation, json};
use pcp::pddl::{parse_domain, parse_plan, parse_problem, translate_domain, translate_problem, TranslateOptions};
use pcp::proofgen::generate_derivation;
use pcp::semantics::{canonical_handler, evaluate_plan};
use pcp::state::wf_world_member;
use pcp::syntax::{Polarity, World};

/// (directory, plan length, needs closed-world completion)
const BENCHMARKS: [(&str, usize, bool); 5] = [
    ("blocks-ab", 2, false),
    ("blocksworld", 10, false),
    ("logistics", 24, false),
    ("satellite", 9, false),
    ("mprime", 11, true),
];

fn dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks").join(name)
}

// Frame chains get deep enough to need more than the default test stack.
fn with_big_stack(f: impl FnOnce() + Send + 'static) {
    std::thread::Builder::new().stack_size(1 << 28).spawn(f).unwrap().join().unwrap();
}

#[test]
fn benchmark_proofs_have_the_expected_shape() {
    with_big_stack(|| {
        for (name, n, closed) in BENCHMARKS {
            let read = |f: &str| std::fs::read_to_string(dir(name).join(f)).unwrap();
            let ctx = translate_domain(&parse_domain(&read("domain.pddl")).unwrap(), TranslateOptions::default()).unwrap();
            let problem = parse_problem(&read("problem.pddl")).unwrap();
            let (init, goal) = translate_problem(&problem, &ctx, closed).unwrap();
            let plan = parse_plan(&read("plan.txt")).unwrap().actions();
            assert_eq!(plan.len(), n, "{name}");

            let (d, trace) = generate_derivation(&ctx, &init, &goal, &plan).unwrap();
            let c = d.rule_counts();
            assert_eq!((c.apply_action, c.composition, c.weakening, c.shrink), (n, n - 1, 1, 1), "{name}");
            let frames: usize = trace.steps.iter().map(|s| s.frames.len()).sum();
            assert_eq!(c.frame, frames, "{name}");
            assert_eq!(trace.counts, c);

            let j = check_derivation(&ctx, &d).unwrap();
            assert_eq!(j.pre, init);
            assert_eq!(j.post, goal);

            // the concrete run from the initial world lands in the goal
            let world: World = init.iter().filter(|m| m.polarity == Polarity::Plus).map(|m| m.atom.clone()).collect();
            let out = evaluate_plan(&mut canonical_handler(&ctx), &j.plan, &world).unwrap();
            assert!(wf_world_member(&out, &goal), "{name}");

            // regeneration is byte-for-byte identical
            let (again, _) = generate_derivation(&ctx, &init, &goal, &plan).unwrap();
            let text = json::encode(&d);
            assert_eq!(text, json::encode(&again));
            assert_eq!(json::decode(&text).unwrap(), d);
        }
    });
}

#[test]
fn mprime_needs_the_closed_world() {
    with_big_stack(|| {
        let read = |f: &str| std::fs::read_to_string(dir("mprime").join(f)).unwrap();
        let ctx = translate_domain(&parse_domain(&read("domain.pddl")).unwrap(), TranslateOptions::default()).unwrap();
        let (init, goal) = translate_problem(&parse_problem(&read("problem.pddl")).unwrap(), &ctx, false).unwrap();
        let plan = parse_plan(&read("plan.txt")).unwrap().actions();
        assert!(generate_derivation(&ctx, &init, &goal, &plan).is_err());
    });
}
