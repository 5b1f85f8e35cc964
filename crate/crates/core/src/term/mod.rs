//! First-order terms, signatures and rewrite rules.
//!
//! Symbols are interned in a [`Signature`] and referenced by index, so a
//! [`Term`] is only meaningful together with the signature it was built
//! against. Terms are immutable values; sharing them across threads is fine.

mod parse;

pub use parse::{parse_term, parse_trs, ParseError, ParseErrorKind};

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of a function symbol inside its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Defined,
    Constructor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol `{name}` used with arity {existing} and {requested}")]
    ArityConflict {
        name: String,
        existing: usize,
        requested: usize,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

/// A finite set of function symbols with fixed arities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<FunctionSymbol>,
    by_name: HashMap<String, Symbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a symbol, or returns the existing one if the name is already
    /// present with the same arity. The kind of an existing symbol is kept.
    pub fn add(
        &mut self,
        name: &str,
        arity: usize,
        kind: SymbolKind,
    ) -> Result<Symbol, SignatureError> {
        if let Some(&sym) = self.by_name.get(name) {
            let existing = self.symbols[sym.index()].arity;
            if existing != arity {
                return Err(SignatureError::ArityConflict {
                    name: name.to_string(),
                    existing,
                    requested: arity,
                });
            }
            return Ok(sym);
        }
        let sym = Symbol(self.symbols.len() as u32);
        self.symbols.push(FunctionSymbol {
            name: name.to_string(),
            arity,
            kind,
        });
        self.by_name.insert(name.to_string(), sym);
        Ok(sym)
    }

    /// Adds a symbol under a name that does not clash with any existing one,
    /// appending underscores to `base` as needed.
    pub fn add_fresh(&mut self, base: &str, arity: usize, kind: SymbolKind) -> Symbol {
        let mut name = base.to_string();
        while self.by_name.contains_key(&name) {
            name.push('_');
        }
        self.add(&name, arity, kind).expect("fresh name")
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.by_name.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Result<Symbol, SignatureError> {
        self.lookup(name)
            .ok_or_else(|| SignatureError::UnknownSymbol(name.to_string()))
    }

    pub fn symbol(&self, sym: Symbol) -> &FunctionSymbol {
        &self.symbols[sym.index()]
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.symbols[sym.index()].name
    }

    pub fn arity(&self, sym: Symbol) -> usize {
        self.symbols[sym.index()].arity
    }

    pub fn kind(&self, sym: Symbol) -> SymbolKind {
        self.symbols[sym.index()].kind
    }

    pub fn is_defined(&self, sym: Symbol) -> bool {
        self.kind(sym) == SymbolKind::Defined
    }

    pub fn set_kind(&mut self, sym: Symbol, kind: SymbolKind) {
        self.symbols[sym.index()].kind = kind;
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.symbols.len() as u32).map(Symbol)
    }

    pub fn defined(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(|&s| self.is_defined(s))
    }

    pub fn constructors(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols().filter(|&s| !self.is_defined(s))
    }

    /// Symbols sorted by name; the order used wherever output must be stable.
    pub fn sorted_by_name(&self) -> Vec<Symbol> {
        let mut syms: Vec<Symbol> = self.symbols().collect();
        syms.sort_by(|a, b| self.name(*a).cmp(self.name(*b)));
        syms
    }
}

/// A variable name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn app(sym: Symbol, args: Vec<Term>) -> Term {
        Term::App(sym, args)
    }

    pub fn constant(sym: Symbol) -> Term {
        Term::App(sym, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root(&self) -> Option<Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(*f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of variable and application nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Longest chain of application nodes below the root; variables and
    /// constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) if args.is_empty() => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// All subterms in pre-order, the term itself first.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            for a in t.args().iter().rev() {
                stack.push(a);
            }
        }
        out
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in self.subterms() {
            if let Term::Var(v) = t {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.subterms().iter().all(|t| !t.is_var())
    }

    /// True if no defined symbol occurs in the term.
    pub fn is_constructor_term(&self, sig: &Signature) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(f, args) => {
                !sig.is_defined(*f) && args.iter().all(|a| a.is_constructor_term(sig))
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(sym, args) => {
                f.write_str(self.sig.name(*sym))?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{}", a.display(self.sig))?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Size and depth of a term.
pub fn term_stats(t: &Term) -> (usize, usize) {
    (t.size(), t.depth())
}

/// Basic terms: a defined root applied to constructor terms.
pub fn is_basic(t: &Term, sig: &Signature) -> bool {
    match t {
        Term::Var(_) => false,
        Term::App(f, args) => {
            sig.is_defined(*f) && args.iter().all(|a| a.is_constructor_term(sig))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(HashMap<Var, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Var, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| self.apply(a)).collect()),
        }
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

/// Syntactic matching: the minimal `σ` with `pattern σ = subject`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if match_into(pattern, subject, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => match sigma.get(v) {
            Some(bound) => bound == subject,
            None => {
                sigma.insert(v.clone(), subject.clone());
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ss)) => {
            f == g
                && ps.len() == ss.len()
                && ps.iter().zip(ss).all(|(p, s)| match_into(p, s, sigma))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

/// True if `subject` is an instance of `pattern`.
pub fn matches(pattern: &Term, subject: &Term) -> bool {
    match_term(pattern, subject).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrsError {
    #[error("left-hand side of rule {0} is a variable")]
    VariableLhs(usize),
    #[error("rule {rule}: variable `{var}` occurs on the right but not on the left")]
    FreshVariable { rule: usize, var: String },
    #[error("rule {rule}: symbol `{name}` applied to {found} arguments, arity is {arity}")]
    ArityMismatch {
        rule: usize,
        name: String,
        arity: usize,
        found: usize,
    },
}

/// A finite term rewrite system together with its signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trs {
    pub signature: Signature,
    pub rules: Vec<Rule>,
}

impl Trs {
    /// Validates the rules and recomputes the defined/constructor split from
    /// the left-hand side roots.
    pub fn new(mut signature: Signature, rules: Vec<Rule>) -> Result<Trs, TrsError> {
        for (i, rule) in rules.iter().enumerate() {
            let Some(_) = rule.lhs.root() else {
                return Err(TrsError::VariableLhs(i + 1));
            };
            let lhs_vars: HashSet<Var> = rule.lhs.vars().into_iter().collect();
            if let Some(v) = rule.rhs.vars().into_iter().find(|v| !lhs_vars.contains(v)) {
                return Err(TrsError::FreshVariable {
                    rule: i + 1,
                    var: v.name().to_string(),
                });
            }
            for side in [&rule.lhs, &rule.rhs] {
                for t in side.subterms() {
                    if let Term::App(f, args) = t {
                        if signature.arity(*f) != args.len() {
                            return Err(TrsError::ArityMismatch {
                                rule: i + 1,
                                name: signature.name(*f).to_string(),
                                arity: signature.arity(*f),
                                found: args.len(),
                            });
                        }
                    }
                }
            }
        }
        let roots: HashSet<Symbol> = rules.iter().filter_map(|r| r.lhs.root()).collect();
        for sym in signature.symbols().collect::<Vec<_>>() {
            let kind = if roots.contains(&sym) {
                SymbolKind::Defined
            } else {
                SymbolKind::Constructor
            };
            signature.set_kind(sym, kind);
        }
        Ok(Trs { signature, rules })
    }

    /// Left-hand sides are basic terms.
    pub fn is_constructor_system(&self) -> bool {
        self.rules.iter().all(|r| is_basic(&r.lhs, &self.signature))
    }

    pub fn max_rhs_size(&self) -> usize {
        self.rules.iter().map(|r| r.rhs.size()).max().unwrap_or(0)
    }
}

impl fmt::Display for Trs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut vars: Vec<Var> = Vec::new();
        for r in &self.rules {
            for v in r.lhs.vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        if !vars.is_empty() {
            f.write_str("(VAR")?;
            for v in &vars {
                write!(f, " {v}")?;
            }
            f.write_str(")\n")?;
        }
        f.write_str("(RULES\n")?;
        for r in &self.rules {
            writeln!(
                f,
                "  {} -> {}",
                r.lhs.display(&self.signature),
                r.rhs.display(&self.signature)
            )?;
        }
        f.write_str(")\n")
    }
}
