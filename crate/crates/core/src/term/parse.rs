//! Reader for the `(VAR …)(RULES …)(COMMENT …)` exchange format.
//!
//! ```text
//! file := ws decl*
//! decl := "(VAR" ident* ")" | "(RULES" rule* ")" | "(COMMENT" anytext ")"
//! rule := term "->" term
//! term := ident | ident "(" (term ("," term)*)? ")"
//! ```
//!
//! Comment bodies may contain nested balanced parentheses.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use super::{Rule, Signature, SymbolKind, Term, Trs, TrsError, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    ArityConflict {
        name: String,
        first: usize,
        second: usize,
    },
    VariableLhs,
    FreshVariable(String),
    VariableApplied(String),
    UnknownSymbol(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::ArityConflict {
                name,
                first,
                second,
            } => write!(f, "symbol `{name}` used with arity {first} and {second}"),
            ParseErrorKind::VariableLhs => f.write_str("left-hand side is a variable"),
            ParseErrorKind::FreshVariable(v) => {
                write!(f, "variable `{v}` on the right-hand side does not occur on the left")
            }
            ParseErrorKind::VariableApplied(v) => write!(f, "variable `{v}` applied to arguments"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown function symbol `{s}`"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

/// Untyped term as read, before symbols are resolved.
#[derive(Debug)]
struct RawTerm {
    name: String,
    args: Option<Vec<RawTerm>>,
    pos: Pos,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            pos: Pos { line: 1, column: 1 },
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.pos.line,
            column: self.pos.column,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if !is_ident_char(c) {
                break;
            }
            name.push(c);
            self.bump();
        }
        if name.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected identifier, found `{c}`")),
                None => self.error("expected identifier, found end of input"),
            });
        }
        Ok((name, start))
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let (name, pos) = self.ident()?;
        self.skip_ws();
        if self.peek() != Some('(') {
            return Ok(RawTerm {
                name,
                args: None,
                pos,
            });
        }
        self.bump();
        let mut args = Vec::new();
        self.skip_ws();
        if self.peek() == Some(')') {
            self.bump();
            return Ok(RawTerm {
                name,
                args: Some(args),
                pos,
            });
        }
        loop {
            args.push(self.term()?);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(')') => break,
                Some(c) => return Err(self.error(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(self.error("unterminated argument list")),
            }
        }
        Ok(RawTerm {
            name,
            args: Some(args),
            pos,
        })
    }

    fn arrow(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() != Some('-') {
            return Err(self.error("expected `->`"));
        }
        self.bump();
        if self.peek() != Some('>') {
            return Err(self.error("expected `->`"));
        }
        self.bump();
        Ok(())
    }

    fn comment_body(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.bump() {
                Some('(') => depth += 1,
                Some(')') if depth == 0 => return Ok(()),
                Some(')') => depth -= 1,
                Some(_) => {}
                None => return Err(self.error("unterminated COMMENT")),
            }
        }
    }
}

/// Arity as used in the text; `c` and `c()` are the same constant.
fn raw_arity(t: &RawTerm) -> usize {
    t.args.as_ref().map_or(0, Vec::len)
}

/// Parses a rewrite system. Symbol arities are inferred from use and the
/// defined symbols are exactly the roots of left-hand sides.
pub fn parse_trs(text: &str) -> Result<Trs, ParseError> {
    let mut cur = Cursor::new(text);
    let mut vars: HashSet<String> = HashSet::new();
    let mut raw_rules: Vec<(RawTerm, RawTerm)> = Vec::new();
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
        cur.expect('(')?;
        let (keyword, kw_pos) = cur.ident()?;
        match keyword.as_str() {
            "VAR" => loop {
                cur.skip_ws();
                if cur.peek() == Some(')') {
                    cur.bump();
                    break;
                }
                let (v, _) = cur.ident()?;
                vars.insert(v);
            },
            "RULES" => loop {
                cur.skip_ws();
                if cur.peek() == Some(')') {
                    cur.bump();
                    break;
                }
                let lhs = cur.term()?;
                cur.arrow()?;
                let rhs = cur.term()?;
                raw_rules.push((lhs, rhs));
            },
            "COMMENT" => cur.comment_body()?,
            other => {
                return Err(ParseError {
                    line: kw_pos.line,
                    column: kw_pos.column,
                    kind: ParseErrorKind::Syntax(format!("unknown declaration `{other}`")),
                })
            }
        }
    }

    // Variable declarations apply to the whole file, so symbols are resolved
    // only after everything has been read.
    let mut arities: HashMap<String, (usize, Pos)> = HashMap::new();
    let mut sig = Signature::new();
    let mut rules = Vec::with_capacity(raw_rules.len());
    for (lhs, rhs) in &raw_rules {
        let l = resolve(lhs, &vars, &mut sig, &mut arities)?;
        let r = resolve(rhs, &vars, &mut sig, &mut arities)?;
        if l.is_var() {
            return Err(ParseError {
                line: lhs.pos.line,
                column: lhs.pos.column,
                kind: ParseErrorKind::VariableLhs,
            });
        }
        let lv: HashSet<Var> = l.vars().into_iter().collect();
        if let Some(v) = r.vars().into_iter().find(|v| !lv.contains(v)) {
            let pos = find_var(rhs, v.name()).unwrap_or(rhs.pos);
            return Err(ParseError {
                line: pos.line,
                column: pos.column,
                kind: ParseErrorKind::FreshVariable(v.name().to_string()),
            });
        }
        rules.push(Rule { lhs: l, rhs: r });
    }
    Trs::new(sig, rules).map_err(|e| {
        // unreachable after the checks above, but keep a located error
        let kind = match e {
            TrsError::VariableLhs(_) => ParseErrorKind::VariableLhs,
            TrsError::FreshVariable { var, .. } => ParseErrorKind::FreshVariable(var),
            TrsError::ArityMismatch { name, .. } => ParseErrorKind::Syntax(format!(
                "inconsistent arity for `{name}`"
            )),
        };
        ParseError {
            line: 1,
            column: 1,
            kind,
        }
    })
}

fn find_var(t: &RawTerm, name: &str) -> Option<Pos> {
    if t.name == name && t.args.is_none() {
        return Some(t.pos);
    }
    t.args.iter().flatten().find_map(|a| find_var(a, name))
}

fn resolve(
    t: &RawTerm,
    vars: &HashSet<String>,
    sig: &mut Signature,
    arities: &mut HashMap<String, (usize, Pos)>,
) -> Result<Term, ParseError> {
    if vars.contains(&t.name) {
        if t.args.is_some() {
            return Err(ParseError {
                line: t.pos.line,
                column: t.pos.column,
                kind: ParseErrorKind::VariableApplied(t.name.clone()),
            });
        }
        return Ok(Term::var(&t.name));
    }
    let arity = raw_arity(t);
    if let Some(&(first, _)) = arities.get(&t.name) {
        if first != arity {
            return Err(ParseError {
                line: t.pos.line,
                column: t.pos.column,
                kind: ParseErrorKind::ArityConflict {
                    name: t.name.clone(),
                    first,
                    second: arity,
                },
            });
        }
    } else {
        arities.insert(t.name.clone(), (arity, t.pos));
    }
    let sym = sig
        .add(&t.name, arity, SymbolKind::Constructor)
        .expect("arity checked above");
    let args = t
        .args
        .iter()
        .flatten()
        .map(|a| resolve(a, vars, sig, arities))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Term::App(sym, args))
}

/// Parses a single term against an existing signature. Identifiers that are
/// not symbols of `sig` are read as variables.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(text);
    let raw = cur.term()?;
    cur.skip_ws();
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("trailing input starting at `{c}`")));
    }
    resolve_in(&raw, sig)
}

fn resolve_in(t: &RawTerm, sig: &Signature) -> Result<Term, ParseError> {
    let err = |kind| ParseError {
        line: t.pos.line,
        column: t.pos.column,
        kind,
    };
    match sig.lookup(&t.name) {
        None if t.args.is_none() => Ok(Term::var(&t.name)),
        None => Err(err(ParseErrorKind::UnknownSymbol(t.name.clone()))),
        Some(sym) => {
            let arity = raw_arity(t);
            if sig.arity(sym) != arity {
                return Err(err(ParseErrorKind::ArityConflict {
                    name: t.name.clone(),
                    first: sig.arity(sym),
                    second: arity,
                }));
            }
            let args = t
                .args
                .iter()
                .flatten()
                .map(|a| resolve_in(a, sig))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::App(sym, args))
        }
    }
}
