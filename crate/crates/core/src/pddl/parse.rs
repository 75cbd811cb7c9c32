//! Recursive-descent readers for domain, problem and plan files over the
//! s-expression tree.

use super::ast::{ActionAst, DomainAst, Literal, ProblemAst, SUPPORTED_REQUIREMENTS};
use super::sexpr::{parse_all, parse_all_at, Pos, SExpr};
use super::ParseError;
use crate::syntax::{ActionInstance, Atom, Ident, Plan, Term};

fn unexpected(e: &SExpr, expected: &[&str]) -> ParseError {
    ParseError::syntax(e.pos(), expected, e.describe())
}

fn missing(end: Pos, expected: &[&str]) -> ParseError {
    ParseError::syntax(end, expected, "`)`".to_string())
}

fn list<'a>(e: &'a SExpr, expected: &str) -> Result<(&'a [SExpr], Pos), ParseError> {
    match e {
        SExpr::List { items, end, .. } => Ok((items, *end)),
        SExpr::Symbol { .. } => Err(unexpected(e, &[expected])),
    }
}

fn keyword(e: &SExpr, kw: &str) -> bool {
    e.symbol().is_some_and(|s| s.eq_ignore_ascii_case(kw))
}

fn expect_keyword(e: &SExpr, kw: &str) -> Result<(), ParseError> {
    if keyword(e, kw) {
        Ok(())
    } else {
        Err(unexpected(e, &[&format!("`{kw}`")]))
    }
}

fn name(e: &SExpr) -> Result<Ident, ParseError> {
    match e.symbol() {
        Some(s) if !s.starts_with('?') && !s.starts_with(':') => Ok(Ident::new(s)),
        _ => Err(unexpected(e, &["name"])),
    }
}

fn variable(e: &SExpr) -> Result<Ident, ParseError> {
    match e.symbol().and_then(|s| s.strip_prefix('?')) {
        Some(v) if !v.is_empty() => Ok(Ident::new(v)),
        _ => Err(unexpected(e, &["variable"])),
    }
}

fn term(e: &SExpr) -> Result<Term, ParseError> {
    match e.symbol() {
        Some(s) if s.starts_with('?') => variable(e).map(Term::Var),
        Some(_) => name(e).map(Term::Const),
        None => Err(unexpected(e, &["term"])),
    }
}

fn sole(text: &str, what: &str) -> Result<SExpr, ParseError> {
    let mut top = parse_all(text)?.into_iter();
    let first = top
        .next()
        .ok_or_else(|| ParseError::syntax(Pos { line: 1, col: 1 }, &[what], "end of input".to_string()))?;
    if let Some(extra) = top.next() {
        return Err(unexpected(&extra, &["end of input"]));
    }
    Ok(first)
}

/// `(define (<kind> N) section...)`; returns the name and the sections.
fn define<'a>(top: &'a SExpr, kind: &str) -> Result<(Ident, &'a [SExpr]), ParseError> {
    let (items, end) = list(top, "`(define ...)`")?;
    let head = items.first().ok_or_else(|| missing(end, &["`define`"]))?;
    expect_keyword(head, "define")?;
    let header = items.get(1).ok_or_else(|| missing(end, &[&format!("`({kind} ...)`")]))?;
    let (h, hend) = list(header, &format!("`({kind} ...)`"))?;
    expect_keyword(h.first().ok_or_else(|| missing(hend, &[&format!("`{kind}`")]))?, kind)?;
    let n = name(h.get(1).ok_or_else(|| missing(hend, &["name"]))?)?;
    if let Some(extra) = h.get(2) {
        return Err(unexpected(extra, &["`)`"]));
    }
    Ok((n, &items[2..]))
}

fn section<'a>(e: &'a SExpr, allowed: &[&str]) -> Result<(String, &'a [SExpr]), ParseError> {
    let (items, end) = list(e, "section")?;
    let head = items.first().ok_or_else(|| missing(end, allowed))?;
    match head.symbol().map(str::to_ascii_lowercase) {
        Some(kw) if allowed.contains(&kw.as_str()) => Ok((kw, &items[1..])),
        _ => Err(unexpected(head, allowed)),
    }
}

pub fn parse_domain(text: &str) -> Result<DomainAst, ParseError> {
    let top = sole(text, "`(define ...)`")?;
    let (dname, sections) = define(&top, "domain")?;
    let mut domain = DomainAst {
        name: dname,
        requirements: Vec::new(),
        constants: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
    };
    for s in sections {
        let (kw, body) = section(s, &[":requirements", ":constants", ":predicates", ":action"])?;
        match kw.as_str() {
            ":requirements" => {
                for r in body {
                    let req = r.symbol().map(str::to_ascii_lowercase).ok_or_else(|| unexpected(r, &["requirement"]))?;
                    if !SUPPORTED_REQUIREMENTS.contains(&req.as_str()) {
                        let pos = r.pos();
                        return Err(ParseError::UnsupportedRequirement {
                            line: pos.line,
                            col: pos.col,
                            requirement: req,
                        });
                    }
                    domain.requirements.push(req);
                }
            }
            ":constants" => {
                for c in body {
                    domain.constants.push(name(c)?);
                }
            }
            ":predicates" => {
                for p in body {
                    let (items, end) = list(p, "predicate declaration")?;
                    let pname = name(items.first().ok_or_else(|| missing(end, &["predicate name"]))?)?;
                    for v in &items[1..] {
                        variable(v)?;
                    }
                    domain.predicates.push((pname, items.len() - 1));
                }
            }
            _ => domain.actions.push(action(body, s)?),
        }
    }
    Ok(domain)
}

fn action(body: &[SExpr], whole: &SExpr) -> Result<ActionAst, ParseError> {
    let end = match whole {
        SExpr::List { end, .. } => *end,
        SExpr::Symbol { pos, .. } => *pos,
    };
    let aname = name(body.first().ok_or_else(|| missing(end, &["action name"]))?)?;
    let mut act = ActionAst {
        name: aname,
        params: Vec::new(),
        precondition: Vec::new(),
        effect: Vec::new(),
    };
    let mut rest = body[1..].iter();
    while let Some(key) = rest.next() {
        let kw = key.symbol().map(str::to_ascii_lowercase);
        let allowed = [":parameters", ":precondition", ":effect"];
        let Some(kw) = kw.filter(|k| allowed.contains(&k.as_str())) else {
            return Err(unexpected(key, &allowed));
        };
        let value = rest.next().ok_or_else(|| missing(end, &["value"]))?;
        match kw.as_str() {
            ":parameters" => {
                let (items, _) = list(value, "parameter list")?;
                act.params = items.iter().map(variable).collect::<Result<_, _>>()?;
            }
            ":precondition" => act.precondition = conjunction(value)?,
            _ => act.effect = conjunction(value)?,
        }
    }
    Ok(act)
}

/// Flattens `(and ...)` at any depth; `()` and `(and)` are empty and a bare
/// literal stands for a one-element conjunction.
pub(crate) fn conjunction(e: &SExpr) -> Result<Vec<Literal>, ParseError> {
    let mut out = Vec::new();
    let mut stack = vec![e];
    while let Some(e) = stack.pop() {
        let (items, _) = list(e, "`(and ...)` or literal")?;
        match items.first() {
            None => {}
            Some(h) if keyword(h, "and") => stack.extend(items[1..].iter().rev()),
            Some(_) => out.push(literal(e)?),
        }
    }
    Ok(out)
}

fn atom_from(items: &[SExpr], end: Pos) -> Result<Atom, ParseError> {
    let pred = name(items.first().ok_or_else(|| missing(end, &["predicate"]))?)?;
    let args = items[1..].iter().map(term).collect::<Result<Vec<_>, _>>()?;
    Ok(Atom::new(pred.as_str(), args))
}

fn equality(items: &[SExpr], end: Pos) -> Result<(Term, Term), ParseError> {
    match items {
        [_, l, r] => Ok((term(l)?, term(r)?)),
        [_, _, _, extra, ..] => Err(unexpected(extra, &["`)`"])),
        _ => Err(missing(end, &["term"])),
    }
}

fn literal(e: &SExpr) -> Result<Literal, ParseError> {
    let (items, end) = list(e, "literal")?;
    let head = items.first().ok_or_else(|| missing(end, &["literal"]))?;
    if keyword(head, "not") {
        let inner = match &items[1..] {
            [inner] => inner,
            [] => return Err(missing(end, &["literal"])),
            [_, extra, ..] => return Err(unexpected(extra, &["`)`"])),
        };
        let (ii, iend) = list(inner, "literal")?;
        let ihead = ii.first().ok_or_else(|| missing(iend, &["predicate"]))?;
        if keyword(ihead, "=") {
            let (l, r) = equality(ii, iend)?;
            return Ok(Literal::NotEq(l, r));
        }
        if keyword(ihead, "not") || keyword(ihead, "and") {
            return Err(unexpected(ihead, &["predicate", "`=`"]));
        }
        return Ok(Literal::NotAtom(atom_from(ii, iend)?));
    }
    if keyword(head, "=") {
        let (l, r) = equality(items, end)?;
        return Ok(Literal::Eq(l, r));
    }
    Ok(Literal::Atom(atom_from(items, end)?))
}

pub fn parse_problem(text: &str) -> Result<ProblemAst, ParseError> {
    let top = sole(text, "`(define ...)`")?;
    let (pname, sections) = define(&top, "problem")?;
    let mut domain_name = None;
    let mut objects = Vec::new();
    let mut init = Vec::new();
    let mut goal = Vec::new();
    for s in sections {
        let (kw, body) = section(s, &[":domain", ":objects", ":init", ":goal"])?;
        let end = match s {
            SExpr::List { end, .. } => *end,
            SExpr::Symbol { pos, .. } => *pos,
        };
        match kw.as_str() {
            ":domain" => match body {
                [d] => domain_name = Some(name(d)?),
                [] => return Err(missing(end, &["domain name"])),
                [_, extra, ..] => return Err(unexpected(extra, &["`)`"])),
            },
            ":objects" => {
                for o in body {
                    objects.push(name(o)?);
                }
            }
            ":init" => {
                for a in body {
                    let (items, aend) = list(a, "ground atom")?;
                    if items.first().is_some_and(|h| keyword(h, "not") || keyword(h, "=")) {
                        return Err(unexpected(&items[0], &["predicate"]));
                    }
                    let atom = atom_from(items, aend)?;
                    if !atom.is_ground() {
                        let bad = items[1..].iter().find(|t| t.symbol().is_some_and(|s| s.starts_with('?'))).unwrap();
                        return Err(unexpected(bad, &["constant"]));
                    }
                    init.push(atom);
                }
            }
            _ => match body {
                [g] => goal = conjunction(g)?,
                [] => return Err(missing(end, &["goal formula"])),
                [_, extra, ..] => return Err(unexpected(extra, &["`)`"])),
            },
        }
    }
    let domain_name = domain_name.ok_or_else(|| {
        let end = match &top {
            SExpr::List { end, .. } => *end,
            SExpr::Symbol { pos, .. } => *pos,
        };
        missing(end, &["`(:domain ...)`"])
    })?;
    Ok(ProblemAst {
        name: pname,
        domain_name,
        objects,
        init,
        goal,
    })
}

/// One `(name arg ...)` per line. A leading `N:` step index is skipped, as
/// is anything after `;`.
pub fn parse_plan(text: &str) -> Result<Plan, ParseError> {
    let mut actions = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split(';').next().unwrap_or("");
        let trimmed = line.trim_start();
        let mut offset = line.len() - trimmed.len();
        let mut body = trimmed;
        if let Some(colon) = body.find(':') {
            let index = body[..colon].trim();
            if !index.is_empty() && index.chars().all(|c| c.is_ascii_digit()) {
                offset += colon + 1;
                body = &body[colon + 1..];
            }
        }
        let origin = Pos {
            line: i + 1,
            col: line[..offset].chars().count() + 1,
        };
        let exprs = parse_all_at(body, origin)?;
        let mut exprs = exprs.iter();
        let Some(e) = exprs.next() else { continue };
        if let Some(extra) = exprs.next() {
            return Err(unexpected(extra, &["end of line"]));
        }
        let (items, end) = list(e, "`(action arg ...)`")?;
        let aname = name(items.first().ok_or_else(|| missing(end, &["action name"]))?)?;
        let args = items[1..]
            .iter()
            .map(|a| name(a).map_err(|_| unexpected(a, &["constant"])))
            .collect::<Result<Vec<_>, _>>()?;
        actions.push(ActionInstance {
            name: aname,
            args: args.into_iter().map(Term::Const).collect(),
        });
    }
    Plan::from_actions(&actions).ok_or(ParseError::EmptyPlan)
}
