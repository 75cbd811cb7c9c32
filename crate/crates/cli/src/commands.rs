use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::thread;

use serde_json::{json, Value};
use thiserror::Error;

use pcp::logic::json::{self as proof_json, DecodeError};
use pcp::logic::{check_derivation, Derivation};
use pcp::pddl::{
    parse_domain, parse_plan, parse_problem, translate_domain, translate_problem, Literal, ParseError, ProblemAst,
    TranslateError, TranslateOptions,
};
use pcp::proofgen::{generate_derivation, GenerationTrace};
use pcp::semantics::{canonical_handler, energy_handler, evaluate_plan, satisfies, ActionHandler};
use pcp::state::is_subtype;
use pcp::syntax::{Context, Formula, PlanStep, Polarity, State, World};

use crate::Common;

/// `println!` that ignores a closed standard output.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Status {
    Valid,
    Invalid,
    Error,
}

/// Outcome of a command. Diagnostics go to standard error.
#[derive(Debug)]
pub struct Verdict {
    pub status: Status,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    fn valid() -> Self {
        Verdict {
            status: Status::Valid,
            diagnostics: Vec::new(),
        }
    }

    fn invalid(diagnostics: Vec<String>) -> Self {
        Verdict {
            status: Status::Invalid,
            diagnostics,
        }
    }

    fn error(e: CliError) -> Self {
        Verdict {
            status: Status::Error,
            diagnostics: vec![format!("error: {e}")],
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Translate { path: PathBuf, source: TranslateError },
    #[error("{}: {source}", path.display())]
    Decode { path: PathBuf, source: DecodeError },
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &Path) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    }
}

fn translate_err(path: &Path) -> impl FnOnce(TranslateError) -> CliError + '_ {
    move |source| CliError::Translate {
        path: path.to_path_buf(),
        source,
    }
}

pub struct Inputs {
    common: Common,
    problem: Option<PathBuf>,
}

struct Loaded {
    ctx: Context,
    problem: Option<(ProblemAst, State, State)>,
}

impl Inputs {
    pub fn new(common: Common, problem: Option<PathBuf>) -> Self {
        Inputs { common, problem }
    }

    fn load(&self) -> Result<Loaded, CliError> {
        let dpath = &self.common.domain;
        let domain = parse_domain(&read(dpath)?).map_err(parse_err(dpath))?;
        let opts = TranslateOptions {
            augment_effects: !self.common.no_augment,
        };
        let ctx = translate_domain(&domain, opts).map_err(translate_err(dpath))?;
        let problem = match &self.problem {
            None => None,
            Some(ppath) => {
                let ast = parse_problem(&read(ppath)?).map_err(parse_err(ppath))?;
                if ast.domain_name != domain.name {
                    return Err(CliError::Usage(format!(
                        "{}: problem is for domain `{}`, not `{}`",
                        ppath.display(),
                        ast.domain_name,
                        domain.name
                    )));
                }
                let (init, goal) = translate_problem(&ast, &ctx, self.common.closed_world).map_err(translate_err(ppath))?;
                Some((ast, init, goal))
            }
        };
        Ok(Loaded { ctx, problem })
    }
}

struct PlanOutcome {
    status: Status,
    summary: Option<String>,
    diagnostics: Vec<String>,
    artifacts: Option<(Derivation, GenerationTrace)>,
}

fn verify_one(ctx: &Context, init: &State, goal: &State, path: &Path) -> PlanOutcome {
    let fail = |status, diagnostics| PlanOutcome {
        status,
        summary: None,
        diagnostics,
        artifacts: None,
    };
    let plan = match read(path).and_then(|t| parse_plan(&t).map_err(parse_err(path))) {
        Ok(p) => p,
        Err(e) => return fail(Status::Error, vec![format!("error: {e}")]),
    };
    let actions = plan.actions();
    let (derivation, trace) = match generate_derivation(ctx, init, goal, &actions) {
        Ok(r) => r,
        Err(e) => return fail(Status::Invalid, vec![format!("{}: {e}", path.display())]),
    };
    let judgement = match check_derivation(ctx, &derivation) {
        Ok(j) => j,
        Err(errors) => {
            let mut out = vec![format!("{}: generated proof was rejected by the checker", path.display())];
            out.extend(errors.iter().map(|e| format!("  {e}")));
            return fail(Status::Invalid, out);
        }
    };
    let mut expected: Vec<PlanStep> = actions.iter().cloned().map(PlanStep::Act).collect();
    expected.push(PlanStep::Shrink);
    if judgement.pre != *init || judgement.post != *goal || judgement.plan.flatten() != expected {
        return fail(
            Status::Invalid,
            vec![format!("{}: checked conclusion does not match the problem: {judgement}", path.display())],
        );
    }
    let c = trace.counts;
    PlanOutcome {
        status: Status::Valid,
        summary: Some(format!(
            "valid {}: {} actions, applyAction={} frame={} composition={} weakening={} shrink={}",
            path.display(),
            actions.len(),
            c.apply_action,
            c.frame,
            c.composition,
            c.weakening,
            c.shrink
        )),
        diagnostics: Vec::new(),
        artifacts: Some((derivation, trace)),
    }
}

pub fn verify(inputs: &Inputs, plans: &[PathBuf], emit_proof: Option<PathBuf>, emit_trace: Option<PathBuf>, jobs: usize) -> Verdict {
    if plans.len() > 1 && (emit_proof.is_some() || emit_trace.is_some()) {
        return Verdict::error(CliError::Usage("--emit-proof and --emit-trace need exactly one --plan".into()));
    }
    let loaded = match inputs.load() {
        Ok(l) => l,
        Err(e) => return Verdict::error(e),
    };
    let Some((_, init, goal)) = &loaded.problem else {
        unreachable!("verify always has a problem")
    };
    let ctx = &loaded.ctx;

    let chunk = plans.len().div_ceil(jobs.max(1)).max(1);
    let outcomes: Vec<PlanOutcome> = thread::scope(|s| {
        let handles: Vec<_> = plans
            .chunks(chunk)
            .map(|group| {
                thread::Builder::new()
                    .stack_size(crate::STACK_SIZE)
                    .spawn_scoped(s, move || group.iter().map(|p| verify_one(ctx, init, goal, p)).collect::<Vec<_>>())
                    .expect("spawn verification thread")
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("verification thread panicked")).collect()
    });

    let mut verdict = Verdict::valid();
    for outcome in outcomes {
        verdict.status = verdict.status.max(outcome.status);
        verdict.diagnostics.extend(outcome.diagnostics);
        if let Some(line) = outcome.summary {
            out!("{line}");
        }
        if let Some((derivation, trace)) = outcome.artifacts {
            let emit = || -> Result<(), CliError> {
                if let Some(p) = &emit_proof {
                    write(p, &proof_json::encode(&derivation))?;
                }
                if let Some(p) = &emit_trace {
                    let mut text = serde_json::to_string_pretty(&trace).expect("traces serialize");
                    text.push('\n');
                    write(p, &text)?;
                }
                Ok(())
            };
            if let Err(e) = emit() {
                return Verdict::error(e);
            }
        }
    }
    if verdict.status == Status::Invalid && plans.len() > 1 {
        verdict.diagnostics.push("at least one plan was not verified".into());
    }
    verdict
}

pub fn check_proof(inputs: &Inputs, proof: &Path) -> Verdict {
    let loaded = match inputs.load() {
        Ok(l) => l,
        Err(e) => return Verdict::error(e),
    };
    let Some((_, init, goal)) = &loaded.problem else {
        unreachable!("check-proof always has a problem")
    };
    let derivation = match read(proof).and_then(|t| {
        proof_json::decode(&t).map_err(|source| CliError::Decode {
            path: proof.to_path_buf(),
            source,
        })
    }) {
        Ok(d) => d,
        Err(e) => return Verdict::error(e),
    };
    let judgement = match check_derivation(&loaded.ctx, &derivation) {
        Ok(j) => j,
        Err(errors) => {
            let mut out = vec![format!("{}: proof rejected", proof.display())];
            out.extend(errors.iter().map(|e| format!("  {e}")));
            return Verdict::invalid(out);
        }
    };
    // the proof may assume less than the initial state and promise more
    // than the goal
    if !is_subtype(init, &judgement.pre) {
        return Verdict::invalid(vec![format!(
            "{}: proof precondition {} is not implied by the initial state",
            proof.display(),
            judgement.pre
        )]);
    }
    if !is_subtype(&judgement.post, goal) {
        return Verdict::invalid(vec![format!(
            "{}: proof postcondition {} does not establish the goal",
            proof.display(),
            judgement.post
        )]);
    }
    let actions = judgement.plan.actions();
    out!("valid proof: {} actions", actions.len());
    for a in actions {
        out!("{a}");
    }
    Verdict::valid()
}

fn goal_formula(problem: &ProblemAst) -> Option<Formula> {
    Formula::conjunction(problem.goal.iter().filter_map(|l| match l {
        Literal::Atom(a) => Some(Formula::Pos(a.clone())),
        Literal::NotAtom(a) => Some(Formula::Neg(a.clone())),
        Literal::Eq(..) | Literal::NotEq(..) => None,
    }))
}

pub fn execute(inputs: &Inputs, plan_path: &Path, energy: Option<usize>) -> Verdict {
    let loaded = match inputs.load() {
        Ok(l) => l,
        Err(e) => return Verdict::error(e),
    };
    let Some((ast, init, _)) = &loaded.problem else {
        unreachable!("execute always has a problem")
    };
    let plan = match read(plan_path).and_then(|t| parse_plan(&t).map_err(parse_err(plan_path))) {
        Ok(p) => p,
        Err(e) => return Verdict::error(e),
    };
    let world: World = init
        .iter()
        .filter(|m| m.polarity == Polarity::Plus)
        .map(|m| m.atom.clone())
        .collect();
    let canonical = canonical_handler(&loaded.ctx);
    let mut handler: Box<dyn ActionHandler + '_> = match energy {
        Some(n) => Box::new(energy_handler(canonical, n)),
        None => Box::new(canonical),
    };
    let last = match evaluate_plan(&mut *handler, &plan, &world) {
        Ok(w) => w,
        Err(e) => return Verdict::invalid(vec![format!("{}: {e}", plan_path.display())]),
    };
    for line in last.sorted_lines() {
        out!("{line}");
    }
    match goal_formula(ast) {
        Some(g) if !satisfies(&last, Polarity::Plus, &g) => {
            Verdict::invalid(vec![format!("{}: final world does not satisfy the goal {g}", plan_path.display())])
        }
        _ => Verdict::valid(),
    }
}

fn context_json(ctx: &Context) -> Value {
    let schemas: Vec<Value> = ctx
        .schemas
        .values()
        .map(|s| {
            let constraints: Vec<Value> = s
                .constraints
                .iter()
                .map(|c| {
                    let [l, r] = c.terms();
                    let op = match c {
                        pcp::syntax::Constraint::Eq(..) => "=",
                        pcp::syntax::Constraint::Neq(..) => "!=",
                    };
                    json!({"op": op, "left": l, "right": r})
                })
                .collect();
            json!({
                "name": s.name.as_str(),
                "params": s.params.iter().map(|p| format!("?{p}")).collect::<Vec<_>>(),
                "constraints": constraints,
                "pre": s.pre,
                "post": s.post,
            })
        })
        .collect();
    let predicates: Vec<Value> = ctx
        .predicates
        .iter()
        .map(|(p, n)| json!({"name": p.as_str(), "arity": n}))
        .collect();
    json!({
        "schemas": schemas,
        "predicates": predicates,
        "constants": ctx.constants.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
    })
}

pub fn translate(inputs: &Inputs) -> Verdict {
    let loaded = match inputs.load() {
        Ok(l) => l,
        Err(e) => return Verdict::error(e),
    };
    let mut out = context_json(&loaded.ctx);
    if let Some((_, init, goal)) = &loaded.problem {
        out["init"] = json!(init);
        out["goal"] = json!(goal);
    }
    out!("{}", serde_json::to_string_pretty(&out).expect("values serialize"));
    Verdict::valid()
}
