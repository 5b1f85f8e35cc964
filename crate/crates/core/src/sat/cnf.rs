use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::formula::{Formula, FormulaBuilder, Node};
use super::{atom_space, Atom};
use crate::term::Signature;

/// A clause set in DIMACS numbering. Variables `1..=atoms.len()` are the
/// encoding atoms in [`atom_space`] order; higher variables are auxiliary.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
    pub atoms: Vec<Atom>,
    /// `(variable, name)` pairs written as `c <index> <name>` comments.
    pub names: Vec<(u32, String)>,
}

impl Cnf {
    pub fn atom_var(&self, a: Atom) -> Option<u32> {
        self.atoms.iter().position(|&b| b == a).map(|i| i as u32 + 1)
    }

    /// Whether `model` (indexed by variable minus one) satisfies every clause.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = l.unsigned_abs() as usize;
                v >= 1 && v <= model.len() && model[v - 1] == (l > 0)
            })
        })
    }

    /// Reads the atom values out of a model.
    pub fn atom_assignment<'m>(&self, model: &'m [bool]) -> impl Fn(Atom) -> bool + 'm {
        let index: HashMap<Atom, usize> =
            self.atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        move |a| index.get(&a).is_some_and(|&i| model.get(i).copied().unwrap_or(false))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (v, name) in &self.names {
            let _ = writeln!(out, "c {v} {name}");
        }
        let _ = writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

struct Tseitin<'b> {
    builder: &'b FormulaBuilder,
    atom_vars: HashMap<Atom, u32>,
    node_lits: HashMap<Formula, i32>,
    next_var: u32,
    clauses: Vec<Vec<i32>>,
}

impl Tseitin<'_> {
    fn fresh(&mut self) -> i32 {
        self.next_var += 1;
        self.next_var as i32
    }

    fn define(&mut self, f: Formula) {
        let lit = match self.builder.node(f) {
            Node::True | Node::False => {
                let v = self.fresh();
                let is_true = matches!(self.builder.node(f), Node::True);
                self.clauses.push(vec![if is_true { v } else { -v }]);
                v
            }
            Node::Atom(a) => match self.atom_vars.get(a) {
                Some(&v) => v as i32,
                None => {
                    let v = self.fresh();
                    self.atom_vars.insert(*a, v as u32);
                    v
                }
            },
            Node::Not(g) => -self.node_lits[g],
            Node::And(kids) => {
                let lits: Vec<i32> = kids.iter().map(|k| self.node_lits[k]).collect();
                let v = self.fresh();
                let mut back = vec![v];
                for &l in &lits {
                    self.clauses.push(vec![-v, l]);
                    back.push(-l);
                }
                self.clauses.push(back);
                v
            }
            Node::Or(kids) => {
                let lits: Vec<i32> = kids.iter().map(|k| self.node_lits[k]).collect();
                let v = self.fresh();
                let mut fwd = vec![-v];
                for &l in &lits {
                    self.clauses.push(vec![v, -l]);
                    fwd.push(l);
                }
                self.clauses.push(fwd);
                v
            }
            Node::Iff(a, b) => {
                let (a, b) = (self.node_lits[a], self.node_lits[b]);
                let v = self.fresh();
                self.clauses.push(vec![-v, -a, b]);
                self.clauses.push(vec![-v, a, -b]);
                self.clauses.push(vec![v, a, b]);
                self.clauses.push(vec![v, -a, -b]);
                v
            }
        };
        self.node_lits.insert(f, lit);
    }
}

/// Tseitin transformation of `root`. Every atom of `sig` gets a variable,
/// whether or not it occurs in the formula, and shared nodes get a single
/// auxiliary variable.
pub fn to_cnf(builder: &FormulaBuilder, root: Formula, sig: &Signature) -> Cnf {
    let atoms = atom_space(sig);
    let names = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (i as u32 + 1, a.name(sig)))
        .collect();
    let mut cnf = cnf_over(builder, root, atoms);
    cnf.names = names;
    cnf
}

/// [`to_cnf`] over an explicit atom list, without names.
pub fn cnf_over(builder: &FormulaBuilder, root: Formula, atoms: Vec<Atom>) -> Cnf {
    let atom_vars: HashMap<Atom, u32> =
        atoms.iter().enumerate().map(|(i, &a)| (a, i as u32 + 1)).collect();
    let mut t = Tseitin {
        builder,
        next_var: atoms.len() as u32,
        atom_vars,
        node_lits: HashMap::new(),
        clauses: Vec::new(),
    };
    match builder.node(root) {
        Node::True => {}
        Node::False => t.clauses.push(Vec::new()),
        _ => {
            for f in builder.reachable(root) {
                t.define(f);
            }
            let root_lit = t.node_lits[&root];
            t.clauses.push(vec![root_lit]);
        }
    }
    Cnf {
        num_vars: t.next_var,
        clauses: t.clauses,
        atoms,
        names: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("literal {literal} exceeds the declared {vars} variables")]
    VariableOutOfRange { literal: i64, vars: u32 },
    #[error("header declares {declared} clauses but {found} were given")]
    ClauseCount { declared: usize, found: usize },
}

/// Parses DIMACS CNF. `c <index> <name>` comments are kept as names; other
/// comments are ignored. A final clause without its terminating `0` is
/// accepted.
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut names = Vec::new();
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let syntax = |message: String| DimacsError::Syntax { line: n + 1, message };
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('c') {
            if rest.is_empty() || rest.starts_with(char::is_whitespace) {
                let mut parts = rest.split_whitespace();
                if let (Some(idx), Some(name), None) = (parts.next(), parts.next(), parts.next()) {
                    if let Ok(v) = idx.parse::<u32>() {
                        names.push((v, name.to_string()));
                    }
                }
                continue;
            }
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(syntax("second `p` line".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(syntax(format!("malformed header `{line}`")));
            }
            let vars = parts[2]
                .parse::<u32>()
                .ok()
                .filter(|&v| v < i32::MAX as u32)
                .ok_or_else(|| syntax(format!("bad variable count `{}`", parts[2])))?;
            let count = parts[3]
                .parse::<usize>()
                .map_err(|_| syntax(format!("bad clause count `{}`", parts[3])))?;
            header = Some((vars, count));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::MissingHeader);
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| syntax(format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > vars as u64 {
                return Err(DimacsError::VariableOutOfRange { literal: lit, vars });
            } else {
                current.push(lit as i32);
            }
        }
    }
    let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount { declared, found: clauses.len() });
    }
    Ok(Cnf {
        num_vars,
        clauses,
        atoms: Vec::new(),
        names,
    })
}
