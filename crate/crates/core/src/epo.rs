//! The auxiliary order `≻^k_epo` on term sequences and its descent measure
//! `Slow_k`.
//!
//! Sequences are plain slices of terms; a one-element slice is the term
//! itself. Precedences are given as equivalence classes with natural-number
//! ranks: `f ≻ g` iff the rank of `f`'s class exceeds that of `g`'s class,
//! and `f ≈ g` iff both share a class.
//!
//! # Computing `Slow_k`
//!
//! `Slow_k(a)` is the height of `a` in the descent tree of `≻^k_epo`, which
//! ranges over infinitely many sequences. The computation only ever looks at
//! single ground terms, using the identity `Slow_k([t1 … tm]) = Σ Slow_k(ti)`.
//! For `a = f(s1, …, sm)` the successors split by the case that produces them:
//!
//! * case 1 yields `si` itself and things below it, so it contributes
//!   `max Slow_k(si)`;
//! * cases 3 and 5 yield terms `g(t1, …, tn)` with `n ≤ k` whose arguments
//!   are equivalent to proper subterms of `a`; these are enumerated over one
//!   representative per equivalence class;
//! * case 2 (defined `f` only) yields the empty list and lists of length
//!   `2..=k` of single-term successors, whose best value is `k` times the
//!   best single-term successor.
//!
//! Slow is invariant under `≈`, so memo entries are keyed on a canonical form
//! that replaces every symbol by the least symbol of its class with the same
//! arity and kind. Classes that mix defined symbols and constructors break
//! that invariance and are rejected.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::term::{Signature, Symbol, Term};

/// A finite list of terms. A single term is the one-element sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermSequence(pub Vec<Term>);

impl TermSequence {
    pub fn empty() -> Self {
        TermSequence(Vec::new())
    }

    pub fn items(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self ⊕ other`.
    pub fn concat(&self, other: &TermSequence) -> TermSequence {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TermSequence(v)
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self.0.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        SeqDisplay { seq: self, sig }
    }
}

struct SeqDisplay<'a> {
    seq: &'a TermSequence,
    sig: &'a Signature,
}

impl fmt::Display for SeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.seq.as_term() {
            return write!(f, "{}", t.display(self.sig));
        }
        write!(f, "[")?;
        for (i, t) in self.seq.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", t.display(self.sig))?;
        }
        write!(f, "]")
    }
}

impl From<Term> for TermSequence {
    fn from(t: Term) -> Self {
        TermSequence(vec![t])
    }
}

impl From<Vec<Term>> for TermSequence {
    fn from(v: Vec<Term>) -> Self {
        TermSequence(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrecedenceError {
    #[error("unknown symbol `{0}` in precedence")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is assigned to more than one class")]
    DuplicateSymbol(String),
    #[error("symbol `{0}` has no class")]
    MissingSymbol(String),
    #[error("malformed precedence chain `{0}`")]
    Syntax(String),
}

/// A quasi-precedence as classes with ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precedence {
    class_of: Vec<usize>,
    class_names: Vec<String>,
    class_rank: Vec<u64>,
}

impl Precedence {
    /// Builds a precedence from named classes. Every symbol of `sig` must
    /// belong to exactly one class.
    pub fn new(
        sig: &Signature,
        classes: Vec<(String, u64, Vec<Symbol>)>,
    ) -> Result<Self, PrecedenceError> {
        let mut class_of = vec![usize::MAX; sig.len()];
        let mut class_names = Vec::new();
        let mut class_rank = Vec::new();
        for (c, (name, rank, members)) in classes.into_iter().enumerate() {
            for f in members {
                if f.index() >= sig.len() {
                    return Err(PrecedenceError::UnknownSymbol(format!("#{}", f.0)));
                }
                if class_of[f.index()] != usize::MAX {
                    return Err(PrecedenceError::DuplicateSymbol(sig.name(f).to_string()));
                }
                class_of[f.index()] = c;
            }
            class_names.push(name);
            class_rank.push(rank);
        }
        if let Some(i) = class_of.iter().position(|&c| c == usize::MAX) {
            let f = Symbol(i as u32);
            return Err(PrecedenceError::MissingSymbol(sig.name(f).to_string()));
        }
        Ok(Precedence {
            class_of,
            class_names,
            class_rank,
        })
    }

    /// Parses a chain such as `fib > dfib > s = 0`. Groups separated by `>`
    /// get descending ranks; within a group `=` joins symbols into one class
    /// and `,` separates incomparable classes of the same rank.
    pub fn from_chain(sig: &Signature, chain: &str) -> Result<Self, PrecedenceError> {
        let groups: Vec<&str> = chain.split('>').collect();
        let mut classes = Vec::new();
        for (g, group) in groups.iter().enumerate() {
            let rank = (groups.len() - 1 - g) as u64;
            for class in group.split(',') {
                let mut members = Vec::new();
                for name in class.split('=') {
                    let name = name.trim();
                    if name.is_empty() {
                        return Err(PrecedenceError::Syntax(chain.to_string()));
                    }
                    let f = sig
                        .lookup(name)
                        .ok_or_else(|| PrecedenceError::UnknownSymbol(name.to_string()))?;
                    members.push(f);
                }
                let name = members
                    .iter()
                    .map(|&f| sig.name(f))
                    .collect::<Vec<_>>()
                    .join("=");
                classes.push((name, rank, members));
            }
        }
        Precedence::new(sig, classes)
    }

    pub fn class_of(&self, f: Symbol) -> usize {
        self.class_of[f.index()]
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_name(&self, class: usize) -> &str {
        &self.class_names[class]
    }

    pub fn class_rank(&self, class: usize) -> u64 {
        self.class_rank[class]
    }

    pub fn members(&self, class: usize) -> impl Iterator<Item = Symbol> + '_ {
        self.class_of
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == class)
            .map(|(i, _)| Symbol(i as u32))
    }

    /// The raw rank number of `f`'s class.
    pub fn rank_of(&self, f: Symbol) -> u64 {
        self.class_rank[self.class_of(f)]
    }

    pub fn gt(&self, f: Symbol, g: Symbol) -> bool {
        self.rank_of(f) > self.rank_of(g)
    }

    pub fn equiv(&self, f: Symbol, g: Symbol) -> bool {
        self.class_of(f) == self.class_of(g)
    }

    /// Length of the longest `≻`-chain below `f`.
    pub fn rank(&self, f: Symbol) -> usize {
        let r = self.rank_of(f);
        let mut below: Vec<u64> = self
            .class_of
            .iter()
            .map(|&c| self.class_rank[c])
            .filter(|&x| x < r)
            .collect();
        below.sort_unstable();
        below.dedup();
        below.len()
    }

    /// Every defined symbol is strictly above every constructor.
    pub fn is_admissible(&self, sig: &Signature) -> bool {
        sig.defined()
            .all(|f| sig.constructors().all(|c| self.gt(f, c)))
    }

    /// A class containing both a defined symbol and a constructor, if any.
    pub fn mixed_class(&self, sig: &Signature) -> Option<usize> {
        (0..self.class_count()).find(|&c| {
            let mut kinds = self.members(c).map(|f| sig.kind(f));
            match kinds.next() {
                Some(k) => kinds.any(|x| x != k),
                None => false,
            }
        })
    }
}

/// `s ≈ t`: equal up to replacing symbols by equivalent ones of the same
/// arity.
pub fn term_equiv(s: &Term, t: &Term, prec: &Precedence) -> bool {
    match (s, t) {
        (Term::App(f, xs), Term::App(g, ys)) => {
            xs.len() == ys.len()
                && prec.equiv(*f, *g)
                && xs.iter().zip(ys).all(|(x, y)| term_equiv(x, y, prec))
        }
        _ => s == t,
    }
}

/// `s ⊳̃ t`: some argument of `s` is a superterm of `t` modulo `≈`.
pub fn superterm_mod_equiv_strict(s: &Term, t: &Term, prec: &Precedence) -> bool {
    s.args()
        .iter()
        .any(|a| term_equiv(a, t, prec) || superterm_mod_equiv_strict(a, t, prec))
}

/// `s ⊵̃ t`.
pub fn superterm_mod_equiv(s: &Term, t: &Term, prec: &Precedence) -> bool {
    term_equiv(s, t, prec) || superterm_mod_equiv_strict(s, t, prec)
}

type SequencePair = (Vec<Term>, Vec<Term>);

/// Decision procedure for `≻^k_epo` with a memo table over sequence pairs.
pub struct Epo<'a> {
    sig: &'a Signature,
    prec: &'a Precedence,
    k: usize,
    memo: RefCell<HashMap<SequencePair, bool>>,
}

impl<'a> Epo<'a> {
    /// Panics if `k` is zero.
    pub fn new(sig: &'a Signature, prec: &'a Precedence, k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        Epo {
            sig,
            prec,
            k,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `a ≻^k_epo b`.
    pub fn gt(&self, a: &[Term], b: &[Term]) -> bool {
        let key = (a.to_vec(), b.to_vec());
        if let Some(&r) = self.memo.borrow().get(&key) {
            return r;
        }
        let r = match a {
            [] => false,
            [t] => self.term_gt(t, b),
            _ => self.case4(a, b),
        };
        self.memo.borrow_mut().insert(key, r);
        r
    }

    /// `s ⪰^k_epo b`, where `≈` only relates single terms.
    pub fn ge(&self, s: &Term, b: &[Term]) -> bool {
        matches!(b, [t] if term_equiv(s, t, self.prec)) || self.gt(std::slice::from_ref(s), b)
    }

    fn term_gt(&self, a: &Term, b: &[Term]) -> bool {
        let Term::App(f, ss) = a else {
            return false;
        };
        let f = *f;
        if ss.iter().any(|s| self.ge(s, b)) {
            return true;
        }
        let f_defined = self.sig.is_defined(f);
        if f_defined
            && (b.is_empty() || (2..=self.k).contains(&b.len()))
            && b.iter().all(|t| self.gt(std::slice::from_ref(a), std::slice::from_ref(t)))
        {
            return true;
        }
        let [Term::App(g, ts)] = b else {
            return false;
        };
        if !f_defined || ts.len() > self.k {
            return false;
        }
        let strict = |t: &Term| superterm_mod_equiv_strict(a, t, self.prec);
        if self.prec.gt(f, *g) && ts.iter().all(strict) {
            return true;
        }
        if self.sig.is_defined(*g) && self.prec.equiv(f, *g) {
            for j in 0..ss.len().min(ts.len()) {
                if j > 0 && !term_equiv(&ss[j - 1], &ts[j - 1], self.prec) {
                    break;
                }
                if superterm_mod_equiv_strict(&ss[j], &ts[j], self.prec)
                    && ts[j + 1..].iter().all(strict)
                {
                    return true;
                }
            }
        }
        false
    }

    /// Splits `b` into `a.len()` contiguous blocks: a prefix of equivalent
    /// singletons, one strictly smaller block, then weakly smaller blocks.
    fn case4(&self, a: &[Term], b: &[Term]) -> bool {
        // states: (position in b, strict block seen)
        let mut states: HashSet<(usize, bool)> = HashSet::from([(0, false)]);
        for s in a {
            let mut next = HashSet::new();
            for &(pos, strict) in &states {
                for end in pos..=b.len() {
                    let block = &b[pos..end];
                    let single = std::slice::from_ref(s);
                    let equiv = matches!(block, [t] if term_equiv(s, t, self.prec));
                    if strict {
                        if equiv || self.gt(single, block) {
                            next.insert((end, true));
                        }
                    } else {
                        if equiv {
                            next.insert((end, false));
                        }
                        if self.gt(single, block) {
                            next.insert((end, true));
                        }
                    }
                }
            }
            states = next;
            if states.is_empty() {
                return false;
            }
        }
        states.contains(&(b.len(), true))
    }
}

/// `a ≻^k_epo b`. Panics if `k` is zero.
pub fn epo_gt(
    a: &TermSequence,
    b: &TermSequence,
    k: usize,
    sig: &Signature,
    prec: &Precedence,
) -> bool {
    Epo::new(sig, prec, k).gt(a.items(), b.items())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlowError {
    #[error("k must be positive")]
    ZeroK,
    #[error("Slow is only computed on ground terms")]
    Variable,
    #[error("class `{0}` mixes defined symbols and constructors")]
    MixedClass(String),
    #[error("the successor relation has a cycle")]
    Cycle,
    #[error("budget of {0} evaluated terms exhausted")]
    Budget(usize),
    #[error("value exceeds 64 bits")]
    Overflow,
}

/// Limits for [`slow_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlowBudget {
    /// Maximum number of distinct terms whose measure is computed.
    pub max_terms: usize,
}

impl Default for SlowBudget {
    fn default() -> Self {
        SlowBudget { max_terms: 200_000 }
    }
}

/// Memoized evaluator of `Slow_k` on ground terms.
pub struct Slow<'a> {
    sig: &'a Signature,
    prec: &'a Precedence,
    k: usize,
    budget: SlowBudget,
    canon_sym: Vec<Symbol>,
    memo: HashMap<Term, u64>,
    active: HashSet<Term>,
}

impl<'a> Slow<'a> {
    pub fn new(
        sig: &'a Signature,
        prec: &'a Precedence,
        k: usize,
        budget: SlowBudget,
    ) -> Result<Self, SlowError> {
        if k == 0 {
            return Err(SlowError::ZeroK);
        }
        if let Some(c) = prec.mixed_class(sig) {
            return Err(SlowError::MixedClass(prec.class_name(c).to_string()));
        }
        let canon_sym = sig
            .symbols()
            .map(|f| {
                sig.symbols()
                    .find(|&g| {
                        prec.equiv(f, g) && sig.arity(f) == sig.arity(g) && sig.kind(f) == sig.kind(g)
                    })
                    .unwrap_or(f)
            })
            .collect();
        Ok(Slow {
            sig,
            prec,
            k,
            budget,
            canon_sym,
            memo: HashMap::new(),
            active: HashSet::new(),
        })
    }

    /// The representative of `t`'s `≈`-class used as memo key.
    pub fn canonical(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => Term::App(
                self.canon_sym[f.index()],
                args.iter().map(|a| self.canonical(a)).collect(),
            ),
        }
    }

    pub fn sequence(&mut self, a: &[Term]) -> Result<u64, SlowError> {
        let mut total = 0u64;
        for t in a {
            total = total.checked_add(self.term(t)?).ok_or(SlowError::Overflow)?;
        }
        Ok(total)
    }

    pub fn term(&mut self, t: &Term) -> Result<u64, SlowError> {
        if !t.is_ground() {
            return Err(SlowError::Variable);
        }
        let t = self.canonical(t);
        self.eval(&t)
    }

    fn eval(&mut self, t: &Term) -> Result<u64, SlowError> {
        if let Some(&v) = self.memo.get(t) {
            return Ok(v);
        }
        if t.is_constructor_term(self.sig) {
            let d = t.depth() as u64;
            self.memo.insert(t.clone(), d);
            return Ok(d);
        }
        if self.active.contains(t) {
            return Err(SlowError::Cycle);
        }
        if self.memo.len() >= self.budget.max_terms {
            return Err(SlowError::Budget(self.budget.max_terms));
        }
        self.active.insert(t.clone());
        let result = self.eval_fresh(t);
        self.active.remove(t);
        let v = result?;
        self.memo.insert(t.clone(), v);
        Ok(v)
    }

    fn eval_fresh(&mut self, t: &Term) -> Result<u64, SlowError> {
        let Term::App(f, args) = t else {
            return Err(SlowError::Variable);
        };
        let mut single: Option<u64> = None;
        for a in args {
            let v = self.eval(a)?;
            single = Some(single.map_or(v, |m| m.max(v)));
        }
        for b in self.successors_canonical(t) {
            let v = self.eval(&b)?;
            single = Some(single.map_or(v, |m| m.max(v)));
        }
        let mut best = single;
        if self.sig.is_defined(*f) {
            let lists = match single {
                Some(m) if self.k >= 2 => m.checked_mul(self.k as u64).ok_or(SlowError::Overflow)?,
                _ => 0,
            };
            best = Some(best.map_or(lists, |b| b.max(lists)));
        }
        match best {
            None => Ok(0),
            Some(b) => b.checked_add(1).ok_or(SlowError::Overflow),
        }
    }

    /// Single-term successors of `t` produced by the precedence cases (3 and
    /// 5), one per `≈`-class. Subterm successors are not included.
    pub fn successors(&self, t: &Term) -> Vec<Term> {
        self.successors_canonical(&self.canonical(t))
    }

    fn successors_canonical(&self, t: &Term) -> Vec<Term> {
        let Term::App(f, ss) = t else {
            return Vec::new();
        };
        let f = *f;
        if !self.sig.is_defined(f) {
            return Vec::new();
        }
        let below_a = proper_subterms(t);
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut emit = |u: Term, out: &mut Vec<Term>| {
            if seen.insert(u.clone()) {
                out.push(u);
            }
        };
        for g in self.sig.symbols() {
            let n = self.sig.arity(g);
            if n > self.k || self.canon_sym[g.index()] != g {
                continue;
            }
            if self.prec.gt(f, g) {
                for args in tuples(&below_a, n) {
                    emit(Term::App(g, args), &mut out);
                }
            }
            if self.sig.is_defined(g) && self.prec.equiv(f, g) {
                for j in 0..ss.len().min(n) {
                    let below_sj = proper_subterms(&ss[j]);
                    for tj in &below_sj {
                        for rest in tuples(&below_a, n - j - 1) {
                            let mut args: Vec<Term> = ss[..j].to_vec();
                            args.push(tj.clone());
                            args.extend(rest);
                            emit(Term::App(g, args), &mut out);
                        }
                    }
                }
            }
        }
        out
    }
}

fn proper_subterms(t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = t.subterms().into_iter().skip(1).cloned().collect();
    out.sort();
    out.dedup();
    out
}

fn tuples(pool: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * pool.len());
        for prefix in &out {
            for t in pool {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `Slow_k(a)` for a ground sequence.
pub fn slow_k(
    a: &TermSequence,
    k: usize,
    sig: &Signature,
    prec: &Precedence,
    budget: SlowBudget,
) -> Result<u64, SlowError> {
    Slow::new(sig, prec, k, budget)?.sequence(a.items())
}

/// Length of the longest `≻`-chain below `f`.
pub fn rank(f: Symbol, prec: &Precedence) -> usize {
    prec.rank(f)
}

/// The bound `(k+1)^(N^k·rk(f) + Σ N^(k−i)·Slow_k(ti))` for `t = f(t1 … tn)`,
/// where `N = max Slow_k(ti) + 1`. Returns `Ok(None)` when the bound only
/// exists for arities up to `k` and `n > k`, and `Ok(Some(None))` when it
/// exceeds `u128`.
pub fn theorem_bound(
    slow: &mut Slow<'_>,
    t: &Term,
) -> Result<Option<Option<u128>>, SlowError> {
    let Term::App(f, args) = t else {
        return Err(SlowError::Variable);
    };
    let k = slow.k;
    if args.len() > k {
        return Ok(None);
    }
    let vals = args
        .iter()
        .map(|a| slow.term(a))
        .collect::<Result<Vec<_>, _>>()?;
    let n_big = vals.iter().copied().max().unwrap_or(0) as u128 + 1;
    let exponent = (|| {
        let mut e = n_big
            .checked_pow(k as u32)?
            .checked_mul(slow.prec.rank(*f) as u128)?;
        for (i, &v) in vals.iter().enumerate() {
            let w = n_big.checked_pow((k - i - 1) as u32)?;
            e = e.checked_add(w.checked_mul(v as u128)?)?;
        }
        Some(e)
    })();
    let bound = exponent
        .and_then(|e| u32::try_from(e).ok())
        .and_then(|e| (k as u128 + 1).checked_pow(e));
    Ok(Some(bound))
}

/// Checks `Slow_k(t) ≤ bound(t)` for a term whose arity is at most `k`.
/// Terms outside the theorem's scope count as satisfied.
pub fn theorem_bound_holds(slow: &mut Slow<'_>, t: &Term) -> Result<bool, SlowError> {
    let value = slow.term(t)? as u128;
    Ok(match theorem_bound(slow, t)? {
        None | Some(None) => true,
        Some(Some(b)) => value <= b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, numeral, term};
    use crate::term::parse_trs;

    fn fib_prec(sig: &Signature) -> Precedence {
        Precedence::from_chain(sig, "fib > dfib > s = 0").unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let trs = parse_trs("(VAR x)(RULES h(x) -> a(b(s(0))))").unwrap();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "h > a = b, s = 0").unwrap();
        assert!(term_equiv(&term(sig, "s(0)"), &term(sig, "s(0)"), &prec));
        assert!(!term_equiv(&term(sig, "s(x)"), &term(sig, "0"), &prec));
        assert!(term_equiv(&term(sig, "a(x)"), &term(sig, "b(x)"), &prec));
        assert!(!term_equiv(&term(sig, "a(x)"), &term(sig, "s(x)"), &prec));
    }

    #[test]
    fn superterm_examples() {
        let trs = parse_trs("(VAR x)(RULES h(x) -> a(b(s(0))))").unwrap();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "h > a = b, s = 0").unwrap();
        let st = |s: &str, t: &str| superterm_mod_equiv_strict(&term(sig, s), &term(sig, t), &prec);
        assert!(st("s(s(0))", "0"));
        assert!(!st("x", "x"));
        assert!(st("a(b(x))", "a(x)"));
        assert!(!st("s(0)", "s(0)"));
    }

    #[test]
    fn order_examples() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = fib_prec(sig);
        let seq = |s: &str| TermSequence::from(term(sig, s));
        assert!(epo_gt(&seq("fib(s(x))"), &TermSequence::empty(), 2, sig, &prec));
        assert!(epo_gt(&seq("s(0)"), &seq("0"), 1, sig, &prec));
        for k in 1..5 {
            assert!(!epo_gt(&seq("0"), &seq("s(0)"), k, sig, &prec));
        }
        // case 3 and case 2
        assert!(epo_gt(&seq("fib(s(0))"), &seq("dfib(0,s(0))"), 2, sig, &prec));
        let pair = TermSequence(vec![term(sig, "dfib(0,0)"), term(sig, "0")]);
        assert!(epo_gt(&seq("fib(s(0))"), &pair, 2, sig, &prec));
        assert!(!epo_gt(&seq("fib(s(0))"), &pair, 1, sig, &prec));
        // constructors do not dominate lists
        assert!(!epo_gt(&seq("s(0)"), &TermSequence::empty(), 3, sig, &prec));
    }

    #[test]
    fn sequence_comparison() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = fib_prec(sig);
        let a = TermSequence(vec![term(sig, "s(0)"), term(sig, "fib(0)")]);
        let b = TermSequence(vec![term(sig, "s(0)"), term(sig, "0"), term(sig, "0")]);
        assert!(epo_gt(&a, &b, 2, sig, &prec));
        assert!(!epo_gt(&b, &a, 2, sig, &prec));
        assert!(!epo_gt(&a, &a, 2, sig, &prec));
        assert!(epo_gt(&a, &TermSequence(vec![term(sig, "s(0)")]), 2, sig, &prec));
        assert!(!epo_gt(&TermSequence::empty(), &TermSequence::empty(), 2, sig, &prec));
    }

    #[test]
    fn case_five() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "fib = dfib > s = 0").unwrap();
        let seq = |s: &str| TermSequence::from(term(sig, s));
        assert!(epo_gt(&seq("dfib(s(s(0)),0)"), &seq("dfib(s(0),0)"), 2, sig, &prec));
        assert!(epo_gt(&seq("dfib(s(0),s(0))"), &seq("dfib(s(0),0)"), 2, sig, &prec));
        assert!(!epo_gt(&seq("dfib(s(0),0)"), &seq("dfib(s(0),s(0))"), 2, sig, &prec));
        assert!(epo_gt(&seq("dfib(s(0),0)"), &seq("fib(0)"), 2, sig, &prec));
    }

    #[test]
    fn slow_examples() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = fib_prec(sig);
        let seq = |s: &[&str]| TermSequence(s.iter().map(|x| term(sig, x)).collect());
        for k in 1..4 {
            let v = slow_k(&seq(&["s(s(0))"]), k, sig, &prec, SlowBudget::default());
            assert_eq!(v, Ok(2));
            let v = slow_k(&seq(&["s(0)", "s(s(0))"]), k, sig, &prec, SlowBudget::default());
            assert_eq!(v, Ok(3));
            assert_eq!(slow_k(&seq(&[]), k, sig, &prec, SlowBudget::default()), Ok(0));
        }
        let v = slow_k(&seq(&["x"]), 2, sig, &prec, SlowBudget::default());
        assert_eq!(v, Err(SlowError::Variable));
    }

    #[test]
    fn slow_small_values() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = fib_prec(sig);
        let mut slow = Slow::new(sig, &prec, 1, SlowBudget::default()).unwrap();
        // dfib(0,0): successors 0, [] and s(0), 0 via case 3
        assert_eq!(slow.term(&term(sig, "dfib(0,0)")), Ok(2));
        let mut slow2 = Slow::new(sig, &prec, 2, SlowBudget::default()).unwrap();
        assert_eq!(slow2.term(&term(sig, "dfib(0,0)")), Ok(3));
    }

    #[test]
    fn slow_rejects_mixed_classes() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "fib > dfib = s = 0").unwrap();
        assert!(matches!(
            Slow::new(sig, &prec, 2, SlowBudget::default()),
            Err(SlowError::MixedClass(_))
        ));
    }

    #[test]
    fn slow_budget_is_reported() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = fib_prec(sig);
        let t = Term::app(sig.get("fib").unwrap(), vec![numeral(sig, 3)]);
        let r = slow_k(&t.into(), 2, sig, &prec, SlowBudget { max_terms: 3 });
        assert_eq!(r, Err(SlowError::Budget(3)));
    }

    #[test]
    fn ranks() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = fib_prec(sig);
        let r = |n: &str| rank(sig.get(n).unwrap(), &prec);
        assert_eq!((r("fib"), r("dfib"), r("s"), r("0")), (2, 1, 0, 0));
        // gaps in the raw rank numbers are compressed
        let prec = Precedence::new(
            sig,
            vec![
                ("a".into(), 10, vec![sig.get("fib").unwrap()]),
                ("b".into(), 7, vec![sig.get("dfib").unwrap()]),
                ("c".into(), 3, vec![sig.get("s").unwrap(), sig.get("0").unwrap()]),
            ],
        )
        .unwrap();
        let r = |n: &str| rank(sig.get(n).unwrap(), &prec);
        assert_eq!((r("fib"), r("dfib"), r("s")), (2, 1, 0));
    }

    #[test]
    fn precedence_errors() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        assert!(matches!(
            Precedence::from_chain(sig, "fib > dfib > s"),
            Err(PrecedenceError::MissingSymbol(_))
        ));
        assert!(matches!(
            Precedence::from_chain(sig, "fib > dfib > s = 0 = fib"),
            Err(PrecedenceError::DuplicateSymbol(_))
        ));
        assert!(matches!(
            Precedence::from_chain(sig, "fib > dfib > s = 0 = q"),
            Err(PrecedenceError::UnknownSymbol(_))
        ));
        assert!(fib_prec(sig).is_admissible(sig));
        assert!(!Precedence::from_chain(sig, "fib > s = 0 > dfib")
            .unwrap()
            .is_admissible(sig));
    }
}
