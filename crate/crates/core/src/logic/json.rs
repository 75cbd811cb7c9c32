//! Canonical JSON encoding of derivations.
//!
//! Every node is an object with a `rule` field. The canonical text has
//! sorted keys, no whitespace and a trailing newline, so equal derivations
//! always encode to identical bytes. Pretty-printing is avoided because
//! indentation grows with frame-chain depth.

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::derivation::Derivation;
use crate::syntax::{ActionInstance, FormulaMap, Ident, State, Substitution, Term};

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("bad derivation node at {path}: {message}")]
    Shape { path: String, message: String },
}

fn shape(path: &str, message: impl Into<String>) -> DecodeError {
    DecodeError::Shape {
        path: path.to_string(),
        message: message.into(),
    }
}

// `json!` would clone interpolated values, which is quadratic on chains
fn object<const N: usize>(rule: &str, fields: [(&str, Value); N]) -> Value {
    let mut obj = Map::new();
    obj.insert("rule".to_string(), Value::String(rule.to_string()));
    for (k, v) in fields {
        obj.insert(k.to_string(), v);
    }
    Value::Object(obj)
}

pub fn to_value(d: &Derivation) -> Value {
    // frame chains are built bottom-up to keep recursion shallow
    let mut frames = Vec::new();
    let mut node = d;
    while let Derivation::Frame { map, inner } = node {
        frames.push(map);
        node = inner;
    }
    let mut value = match node {
        Derivation::ApplyAction { action, sigma } => {
            let sigma: Map<String, Value> = sigma
                .bindings()
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
                .collect();
            json!({
                "rule": "applyAction",
                "action": action.name.as_str(),
                "args": action.args.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "sigma": sigma,
            })
        }
        Derivation::Weakening { pre, inner } => object("weakening", [("state", json!(pre)), ("inner", to_value(inner))]),
        Derivation::Shrink { post, inner } => object("shrink", [("state", json!(post)), ("inner", to_value(inner))]),
        Derivation::Composition { left, right } => {
            object("composition", [("left", to_value(left)), ("right", to_value(right))])
        }
        Derivation::Frame { .. } => unreachable!(),
    };
    for map in frames.into_iter().rev() {
        value = object("frame", [("map", json!(map)), ("inner", value)]);
    }
    value
}

/// Canonical text form.
pub fn encode(d: &Derivation) -> String {
    let mut text = serde_json::to_string(&to_value(d)).expect("derivation values serialize");
    text.push('\n');
    text
}

/// Parses JSON text without serde_json's nesting limit; frame chains nest
/// as deep as the states they extend.
pub fn parse_unbounded(text: &str) -> Result<Value, serde_json::Error> {
    use serde::Deserialize;
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let value = Value::deserialize(&mut de)?;
    de.end()?;
    Ok(value)
}

pub fn decode(text: &str) -> Result<Derivation, DecodeError> {
    from_value(&parse_unbounded(text)?)
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value, DecodeError> {
    obj.get(key).ok_or_else(|| shape(path, format!("missing field `{key}`")))
}

fn expect_keys(obj: &Map<String, Value>, keys: &[&str], path: &str) -> Result<(), DecodeError> {
    match obj.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(shape(path, format!("unexpected field `{k}`"))),
        None => Ok(()),
    }
}

fn ident(value: &Value, path: &str) -> Result<Ident, DecodeError> {
    value
        .as_str()
        .and_then(Ident::try_new)
        .ok_or_else(|| shape(path, "expected a non-empty string"))
}

fn state(value: &Value, path: &str) -> Result<State, DecodeError> {
    serde_json::from_value(value.clone()).map_err(|e| shape(path, format!("bad state: {e}")))
}

pub fn from_value(value: &Value) -> Result<Derivation, DecodeError> {
    decode_node(value, "root".to_string())
}

fn decode_node(value: &Value, path: String) -> Result<Derivation, DecodeError> {
    let mut frames: Vec<FormulaMap> = Vec::new();
    let mut value = value;
    let mut path = path;
    loop {
        let obj = value.as_object().ok_or_else(|| shape(&path, "expected an object"))?;
        let rule = field(obj, "rule", &path)?
            .as_str()
            .ok_or_else(|| shape(&path, "`rule` must be a string"))?;
        let node = match rule {
            "frame" => {
                expect_keys(obj, &["rule", "map", "inner"], &path)?;
                let map: FormulaMap = serde_json::from_value(field(obj, "map", &path)?.clone())
                    .map_err(|e| shape(&path, format!("bad map: {e}")))?;
                frames.push(map);
                value = field(obj, "inner", &path)?;
                path.push_str("/inner");
                continue;
            }
            "applyAction" => {
                expect_keys(obj, &["rule", "action", "args", "sigma"], &path)?;
                let name = ident(field(obj, "action", &path)?, &path)?;
                let args = field(obj, "args", &path)?
                    .as_array()
                    .ok_or_else(|| shape(&path, "`args` must be an array"))?
                    .iter()
                    .map(|a| a.as_str().and_then(Term::parse).ok_or_else(|| shape(&path, "bad argument")))
                    .collect::<Result<Vec<_>, _>>()?;
                let sigma = field(obj, "sigma", &path)?
                    .as_object()
                    .ok_or_else(|| shape(&path, "`sigma` must be an object"))?
                    .iter()
                    .map(|(k, v)| Ok((Ident::try_new(k).ok_or_else(|| shape(&path, "empty variable"))?, ident(v, &path)?)))
                    .collect::<Result<Substitution, DecodeError>>()?;
                Derivation::ApplyAction {
                    action: ActionInstance { name, args },
                    sigma,
                }
            }
            "weakening" | "shrink" => {
                expect_keys(obj, &["rule", "state", "inner"], &path)?;
                let s = state(field(obj, "state", &path)?, &path)?;
                let inner = Box::new(decode_node(field(obj, "inner", &path)?, format!("{path}/inner"))?);
                if rule == "weakening" {
                    Derivation::Weakening { pre: s, inner }
                } else {
                    Derivation::Shrink { post: s, inner }
                }
            }
            "composition" => {
                expect_keys(obj, &["rule", "left", "right"], &path)?;
                Derivation::Composition {
                    left: Box::new(decode_node(field(obj, "left", &path)?, format!("{path}/left"))?),
                    right: Box::new(decode_node(field(obj, "right", &path)?, format!("{path}/right"))?),
                }
            }
            other => return Err(shape(&path, format!("unknown rule `{other}`"))),
        };
        return Ok(frames
            .into_iter()
            .rev()
            .fold(node, |inner, map| Derivation::frame(map, inner)));
    }
}
