use std::fmt;

use super::ParseError;

/// 1-based line and column of a token.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SExpr {
    Symbol { text: String, pos: Pos },
    List { items: Vec<SExpr>, pos: Pos, end: Pos },
}

impl SExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SExpr::Symbol { pos, .. } | SExpr::List { pos, .. } => *pos,
        }
    }

    pub fn symbol(&self) -> Option<&str> {
        match self {
            SExpr::Symbol { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }

    pub fn list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            SExpr::Symbol { .. } => None,
        }
    }

    /// Short rendering used for the `found` part of parse errors.
    pub fn describe(&self) -> String {
        match self {
            SExpr::Symbol { text, .. } => format!("`{text}`"),
            SExpr::List { items, .. } => match items.first().and_then(SExpr::symbol) {
                Some(head) => format!("list `({head} ...)`"),
                None => "list".to_string(),
            },
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Open,
    Close,
    Symbol(String),
    Eof,
}

fn lex(text: &str, origin: Pos) -> Vec<(Token, Pos)> {
    let mut tokens = Vec::new();
    let mut line = origin.line;
    let mut col = origin.col;
    let mut chars = text.chars().peekable();
    let mut current: Option<(String, Pos)> = None;

    let flush = |current: &mut Option<(String, Pos)>, tokens: &mut Vec<(Token, Pos)>| {
        if let Some((s, p)) = current.take() {
            tokens.push((Token::Symbol(s), p));
        }
    };

    while let Some(c) = chars.next() {
        let here = Pos { line, col };
        match c {
            '(' | ')' => {
                flush(&mut current, &mut tokens);
                tokens.push((if c == '(' { Token::Open } else { Token::Close }, here));
            }
            ';' => {
                flush(&mut current, &mut tokens);
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            c if c.is_whitespace() => flush(&mut current, &mut tokens),
            c => match &mut current {
                Some((s, _)) => s.push(c),
                None => current = Some((c.to_string(), here)),
            },
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    flush(&mut current, &mut tokens);
    tokens.push((Token::Eof, Pos { line, col }));
    tokens
}

fn describe_token(t: &Token) -> String {
    match t {
        Token::Open => "`(`".to_string(),
        Token::Close => "`)`".to_string(),
        Token::Symbol(s) => format!("`{s}`"),
        Token::Eof => "end of input".to_string(),
    }
}

/// Reads every top-level expression in `text`.
pub fn parse_all(text: &str) -> Result<Vec<SExpr>, ParseError> {
    parse_all_at(text, Pos { line: 1, col: 1 })
}

pub(crate) fn parse_all_at(text: &str, origin: Pos) -> Result<Vec<SExpr>, ParseError> {
    let tokens = lex(text, origin);
    let eof = tokens.len() - 1;
    let mut out = Vec::new();
    let mut i = 0;
    // explicit stack so that deeply nested input cannot overflow
    let mut stack: Vec<(Vec<SExpr>, Pos)> = Vec::new();
    while i < eof {
        let (tok, pos) = &tokens[i];
        i += 1;
        let done = match tok {
            Token::Open => {
                stack.push((Vec::new(), *pos));
                None
            }
            Token::Close => match stack.pop() {
                Some((items, open)) => Some(SExpr::List { items, pos: open, end: *pos }),
                None => return Err(ParseError::syntax(*pos, &["`(`"], describe_token(tok))),
            },
            Token::Symbol(s) => Some(SExpr::Symbol { text: s.clone(), pos: *pos }),
            Token::Eof => unreachable!(),
        };
        if let Some(e) = done {
            match stack.last_mut() {
                Some((items, _)) => items.push(e),
                None => out.push(e),
            }
        }
    }
    if !stack.is_empty() {
        let (tok, pos) = &tokens[eof];
        return Err(ParseError::syntax(*pos, &["`)`"], describe_token(tok)));
    }
    Ok(out)
}
