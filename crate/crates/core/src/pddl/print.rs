//! Canonical PDDL text for parsed files. `parse(print(ast)) == ast` for
//! every AST in the supported subset.

use std::fmt::Write;

use super::ast::{ActionAst, DomainAst, Literal, ProblemAst};
use crate::syntax::{ActionInstance, Ident};

pub fn print_literal(l: &Literal) -> String {
    match l {
        Literal::Atom(a) => a.to_string(),
        Literal::NotAtom(a) => format!("(not {a})"),
        Literal::Eq(x, y) => format!("(= {x} {y})"),
        Literal::NotEq(x, y) => format!("(not (= {x} {y}))"),
    }
}

fn conjunction(ls: &[Literal], indent: &str) -> String {
    let mut out = String::from("(and");
    for l in ls {
        write!(out, "\n{indent}  {}", print_literal(l)).unwrap();
    }
    out.push(')');
    out
}

fn names(ns: &[Ident]) -> String {
    ns.iter().map(Ident::to_string).collect::<Vec<_>>().join(" ")
}

fn print_action(a: &ActionAst, out: &mut String) {
    let params: Vec<String> = a.params.iter().map(|p| format!("?{p}")).collect();
    write!(
        out,
        "\n  (:action {}\n    :parameters ({})\n    :precondition {}\n    :effect {})",
        a.name,
        params.join(" "),
        conjunction(&a.precondition, "      "),
        conjunction(&a.effect, "      ")
    )
    .unwrap();
}

pub fn print_domain(d: &DomainAst) -> String {
    let mut out = format!("(define (domain {})", d.name);
    if !d.requirements.is_empty() {
        write!(out, "\n  (:requirements {})", d.requirements.join(" ")).unwrap();
    }
    if !d.constants.is_empty() {
        write!(out, "\n  (:constants {})", names(&d.constants)).unwrap();
    }
    if !d.predicates.is_empty() {
        out.push_str("\n  (:predicates");
        for (p, arity) in &d.predicates {
            let vars: String = (1..=*arity).map(|i| format!(" ?x{i}")).collect();
            write!(out, "\n    ({p}{vars})").unwrap();
        }
        out.push(')');
    }
    for a in &d.actions {
        print_action(a, &mut out);
    }
    out.push_str(")\n");
    out
}

pub fn print_problem(p: &ProblemAst) -> String {
    let mut out = format!("(define (problem {})\n  (:domain {})", p.name, p.domain_name);
    if !p.objects.is_empty() {
        write!(out, "\n  (:objects {})", names(&p.objects)).unwrap();
    }
    out.push_str("\n  (:init");
    for a in &p.init {
        write!(out, "\n    {a}").unwrap();
    }
    write!(out, ")\n  (:goal {}))\n", conjunction(&p.goal, "    ")).unwrap();
    out
}

pub fn print_plan(actions: &[ActionInstance]) -> String {
    actions.iter().map(|a| format!("{a}\n")).collect()
}
