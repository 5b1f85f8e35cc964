//! Exact rewriting: one-step reducts, longest derivations and runtime
//! complexity tables.
//!
//! Derivation heights are computed by exhaustive depth-first search over the
//! reduction graph with memoization on terms. The search is bounded by a
//! node-expansion budget and a term-size budget; whenever either binds, the
//! affected results carry `truncated = true` and the height is only a lower
//! bound. A cycle in the reduction graph is reported the same way.

use std::collections::{HashMap, HashSet};

use crate::term::{match_term, Rule, Signature, Substitution, Symbol, SymbolKind, Term, Trs, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Innermost,
    Full,
}

/// Limits for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of terms whose successors are computed per query.
    pub node_budget: usize,
    /// Terms larger than this are not expanded.
    pub size_budget: usize,
    pub memoize: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            node_budget: 1_000_000,
            size_budget: 10_000,
            memoize: true,
        }
    }
}

/// One-step rewriting with a fixed system and strategy.
///
/// With a bottom symbol set, every defined-rooted term that is a normal form
/// of the rules additionally rewrites to that symbol, which realizes the
/// bottom-completion on the fly.
#[derive(Debug, Clone, Copy)]
pub struct Rewriter<'a> {
    trs: &'a Trs,
    strategy: Strategy,
    bottom: Option<Symbol>,
}

struct Scan {
    succs: Vec<Term>,
    /// No subterm is a redex of the rules.
    nf_rules: bool,
    /// No subterm is a redex of the rules or of the bottom rule.
    nf: bool,
}

impl<'a> Rewriter<'a> {
    pub fn new(trs: &'a Trs, strategy: Strategy) -> Self {
        Rewriter {
            trs,
            strategy,
            bottom: None,
        }
    }

    /// Enables the on-the-fly bottom rule. `bottom` must be a constant of the
    /// system's signature.
    pub fn with_bottom(mut self, bottom: Symbol) -> Self {
        self.bottom = Some(bottom);
        self
    }

    pub fn trs(&self) -> &'a Trs {
        self.trs
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// The exact set of one-step reducts, in order of discovery.
    pub fn successors(&self, t: &Term) -> Vec<Term> {
        let mut out = self.scan(t).succs;
        let mut seen = HashSet::new();
        out.retain(|u| seen.insert(u.clone()));
        out
    }

    pub fn is_normal_form(&self, t: &Term) -> bool {
        self.scan(t).nf
    }

    fn contract_root(&self, t: &Term, out: &mut Vec<Term>) -> bool {
        let mut any = false;
        for Rule { lhs, rhs } in &self.trs.rules {
            if let Some(sigma) = match_term(lhs, t) {
                out.push(sigma.apply(rhs));
                any = true;
            }
        }
        any
    }

    fn scan(&self, t: &Term) -> Scan {
        let Term::App(f, args) = t else {
            return Scan {
                succs: Vec::new(),
                nf_rules: true,
                nf: true,
            };
        };
        let mut succs = Vec::new();
        let mut args_nf_rules = true;
        let mut args_nf = true;
        for (i, a) in args.iter().enumerate() {
            let sub = self.scan(a);
            args_nf_rules &= sub.nf_rules;
            args_nf &= sub.nf;
            for s in sub.succs {
                let mut new_args = args.clone();
                new_args[i] = s;
                succs.push(Term::App(*f, new_args));
            }
        }
        let mut root = Vec::new();
        let rule_redex = self.contract_root(t, &mut root);
        let nf_rules = args_nf_rules && !rule_redex;
        let bottom_redex = match self.bottom {
            Some(_) => nf_rules && self.trs.signature.is_defined(*f),
            None => false,
        };
        if let (true, Some(b)) = (bottom_redex, self.bottom) {
            root.push(Term::constant(b));
        }
        let root_allowed = match self.strategy {
            Strategy::Full => true,
            Strategy::Innermost => args_nf,
        };
        if root_allowed {
            succs.extend(root);
        }
        Scan {
            succs,
            nf_rules,
            nf: args_nf && !rule_redex && !bottom_redex,
        }
    }
}

/// One-step reducts of `t` under `strategy`.
pub fn successors(t: &Term, trs: &Trs, strategy: Strategy) -> Vec<Term> {
    Rewriter::new(trs, strategy).successors(t)
}

/// Result of a longest-derivation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationRecord {
    pub start: Term,
    pub strategy: Strategy,
    pub height: usize,
    /// A longest derivation found, starting with `start`.
    pub witness: Vec<Term>,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Open,
    Done,
}

#[derive(Debug)]
struct Node {
    term: Term,
    state: State,
    height: usize,
    best: Option<usize>,
    truncated: bool,
}

struct Frame {
    node: usize,
    succs: Vec<usize>,
    next: usize,
}

/// Memoized longest-derivation search. The memo table persists across
/// queries, so measuring many start terms shares work.
pub struct HeightOracle<'a> {
    rewriter: Rewriter<'a>,
    budget: Budget,
    nodes: Vec<Node>,
    index: HashMap<Term, usize>,
}

impl<'a> HeightOracle<'a> {
    pub fn new(rewriter: Rewriter<'a>, budget: Budget) -> Self {
        HeightOracle {
            rewriter,
            budget,
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Number of distinct terms seen so far.
    pub fn explored(&self) -> usize {
        self.nodes.len()
    }

    fn intern(&mut self, t: Term) -> usize {
        if let Some(&i) = self.index.get(&t) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(Node {
            term: t.clone(),
            state: State::Fresh,
            height: 0,
            best: None,
            truncated: false,
        });
        self.index.insert(t, i);
        i
    }

    pub fn height(&mut self, t: &Term) -> DerivationRecord {
        if !self.budget.memoize {
            return plain_height(&self.rewriter, t, &self.budget);
        }
        let root = self.intern(t.clone());
        self.explore(root);
        let node = &self.nodes[root];
        let mut witness = vec![node.term.clone()];
        let mut cur = root;
        while let Some(next) = self.nodes[cur].best {
            witness.push(self.nodes[next].term.clone());
            cur = next;
        }
        DerivationRecord {
            start: t.clone(),
            strategy: self.rewriter.strategy,
            height: node.height,
            witness,
            truncated: node.truncated,
        }
    }

    fn open(&mut self, id: usize, expansions: &mut usize, stack: &mut Vec<Frame>) {
        let too_big = self.nodes[id].term.size() > self.budget.size_budget;
        if too_big || *expansions >= self.budget.node_budget {
            let node = &mut self.nodes[id];
            node.state = State::Done;
            node.truncated = true;
            return;
        }
        *expansions += 1;
        let succs = self.rewriter.successors(&self.nodes[id].term);
        let succs = succs.into_iter().map(|s| self.intern(s)).collect();
        self.nodes[id].state = State::Open;
        stack.push(Frame {
            node: id,
            succs,
            next: 0,
        });
    }

    fn absorb(&mut self, parent: usize, child: usize) {
        let (h, tr) = (self.nodes[child].height, self.nodes[child].truncated);
        let p = &mut self.nodes[parent];
        if p.best.is_none() || h + 1 > p.height {
            p.height = h + 1;
            p.best = Some(child);
        }
        p.truncated |= tr;
    }

    fn explore(&mut self, root: usize) {
        if self.nodes[root].state == State::Done {
            return;
        }
        let mut expansions = 0usize;
        let mut stack = Vec::new();
        self.open(root, &mut expansions, &mut stack);
        while let Some(frame) = stack.last_mut() {
            if frame.next < frame.succs.len() {
                let parent = frame.node;
                let child = frame.succs[frame.next];
                frame.next += 1;
                match self.nodes[child].state {
                    State::Done => self.absorb(parent, child),
                    // a cycle: the system does not terminate on this term
                    State::Open => self.nodes[parent].truncated = true,
                    State::Fresh => {
                        self.open(child, &mut expansions, &mut stack);
                        if self.nodes[child].state == State::Done {
                            self.absorb(parent, child);
                        }
                    }
                }
            } else {
                let id = frame.node;
                stack.pop();
                self.nodes[id].state = State::Done;
                if let Some(top) = stack.last() {
                    self.absorb(top.node, id);
                }
            }
        }
    }
}

fn plain_height(rw: &Rewriter<'_>, t: &Term, budget: &Budget) -> DerivationRecord {
    fn go(
        rw: &Rewriter<'_>,
        t: &Term,
        budget: &Budget,
        expansions: &mut usize,
    ) -> (usize, Vec<Term>, bool) {
        if t.size() > budget.size_budget || *expansions >= budget.node_budget {
            return (0, vec![t.clone()], true);
        }
        *expansions += 1;
        let mut best: Option<(usize, Vec<Term>)> = None;
        let mut truncated = false;
        for s in rw.successors(t) {
            let (h, w, tr) = go(rw, &s, budget, expansions);
            truncated |= tr;
            if best.as_ref().is_none_or(|(bh, _)| h + 1 > *bh) {
                best = Some((h + 1, w));
            }
        }
        match best {
            None => (0, vec![t.clone()], truncated),
            Some((h, w)) => {
                let mut witness = vec![t.clone()];
                witness.extend(w);
                (h, witness, truncated)
            }
        }
    }
    let mut expansions = 0;
    let (height, witness, truncated) = go(rw, t, budget, &mut expansions);
    DerivationRecord {
        start: t.clone(),
        strategy: rw.strategy,
        height,
        witness,
        truncated,
    }
}

/// Length of a longest derivation from `t`.
pub fn derivation_height(
    t: &Term,
    trs: &Trs,
    strategy: Strategy,
    budget: Budget,
) -> DerivationRecord {
    HeightOracle::new(Rewriter::new(trs, strategy), budget).height(t)
}

/// Ground constructor terms of each exact size `0..=max_size`; index 0 is
/// always empty.
pub fn constructor_terms_by_size(sig: &Signature, max_size: usize) -> Vec<Vec<Term>> {
    let cons: Vec<Symbol> = sig.constructors().collect();
    let mut table: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    for n in 1..=max_size {
        let mut level = Vec::new();
        for &c in &cons {
            for args in arg_tuples(&table, sig.arity(c), n - 1) {
                level.push(Term::App(c, args));
            }
        }
        table[n] = level;
    }
    table
}

/// All argument vectors of length `arity` whose sizes sum to `total`, drawn
/// from `table` (indexed by exact size).
fn arg_tuples(table: &[Vec<Term>], arity: usize, total: usize) -> Vec<Vec<Term>> {
    if arity == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=total {
        if first >= table.len() || table[first].is_empty() {
            continue;
        }
        let rest = arg_tuples(table, arity - 1, total - first);
        for t in &table[first] {
            for r in &rest {
                let mut v = Vec::with_capacity(arity);
                v.push(t.clone());
                v.extend(r.iter().cloned());
                out.push(v);
            }
        }
    }
    out
}

/// Ground basic terms of exact size `n`.
pub fn basic_terms_of_size(sig: &Signature, cons_by_size: &[Vec<Term>], n: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for f in sig.defined() {
        if n == 0 {
            continue;
        }
        for args in arg_tuples(cons_by_size, sig.arity(f), n - 1) {
            out.push(Term::App(f, args));
        }
    }
    out
}

/// One row of an empirical runtime-complexity table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcRow {
    pub size: usize,
    /// Maximum derivation height over basic terms of size at most `size`.
    pub height: usize,
    /// A start term attaining `height`, if any basic term of that size exists.
    pub witness: Option<DerivationRecord>,
    pub truncated: bool,
}

/// Maximal derivation heights over all ground basic terms up to each size.
///
/// Returns an empty table when the system has defined symbols but no
/// constant constructor, since no ground basic term exists then. Without
/// defined symbols every row is zero.
pub fn empirical_rc(
    rewriter: Rewriter<'_>,
    max_size: usize,
    budget: Budget,
) -> Vec<RcRow> {
    let sig = &rewriter.trs().signature;
    let has_constant = sig.constructors().any(|c| sig.arity(c) == 0);
    let has_defined = sig.defined().next().is_some();
    if has_defined && !has_constant {
        return Vec::new();
    }
    let cons = constructor_terms_by_size(sig, max_size.saturating_sub(1));
    let mut oracle = HeightOracle::new(rewriter, budget);
    let mut rows: Vec<RcRow> = Vec::with_capacity(max_size);
    let mut best: Option<DerivationRecord> = None;
    let mut truncated = false;
    for n in 1..=max_size {
        for t in basic_terms_of_size(sig, &cons, n) {
            let rec = oracle.height(&t);
            truncated |= rec.truncated;
            if best.as_ref().is_none_or(|b| rec.height > b.height) {
                best = Some(rec);
            }
        }
        rows.push(RcRow {
            size: n,
            height: best.as_ref().map_or(0, |b| b.height),
            witness: best.clone(),
            truncated,
        });
    }
    rows
}

/// Name used for the fresh bottom constructor.
pub const BOTTOM_NAME: &str = "⊥";

/// Extends a constructor system with rules `t → ⊥` for defined-rooted
/// normal forms `t`, making it completely defined on terms within the cap.
///
/// The full extension is infinite. This keeps left-hand sides
/// `f(p1, …, pn)` whose arguments are linear constructor patterns over the
/// constructors and `⊥` of depth at most `depth_cap`, such that no instance
/// is reducible by the original rules. Patterns that are instances of an
/// already added one are skipped, so the most general shapes are kept.
/// Returns the extended system and the bottom symbol.
pub fn bottom_complete(trs: &Trs, depth_cap: usize) -> (Trs, Symbol) {
    let mut sig = trs.signature.clone();
    let bottom = sig.add_fresh(BOTTOM_NAME, 0, SymbolKind::Constructor);
    let cons: Vec<Symbol> = sig.constructors().collect();
    let mut rules = trs.rules.clone();
    let mut added: Vec<Term> = Vec::new();
    let defined: Vec<Symbol> = sig.defined().collect();
    for f in defined {
        let arity = sig.arity(f);
        let mut fresh = 0usize;
        let mut candidates: Vec<Term> = Vec::new();
        let per_arg: Vec<Vec<Term>> = (0..arity)
            .map(|_| patterns(&sig, &cons, depth_cap, &mut fresh))
            .collect();
        cartesian(&per_arg, &mut Vec::new(), &mut |args| {
            candidates.push(Term::App(f, args.to_vec()));
        });
        // most general first
        candidates.sort_by_key(|t| t.subterms().iter().filter(|s| !s.is_var()).count());
        for cand in candidates {
            if added.iter().any(|g| match_term(g, &cand).is_some()) {
                continue;
            }
            let reducible = trs.rules.iter().any(|r| unifiable(&rename(&r.lhs), &cand));
            if !reducible {
                added.push(cand.clone());
                rules.push(Rule {
                    lhs: cand,
                    rhs: Term::constant(bottom),
                });
            }
        }
    }
    let mut out = Trs::new(sig, rules).expect("bottom rules are well formed");
    // the new rules must not change which symbols are defined
    out.signature.set_kind(bottom, SymbolKind::Constructor);
    (out, bottom)
}

fn patterns(sig: &Signature, cons: &[Symbol], depth: usize, fresh: &mut usize) -> Vec<Term> {
    *fresh += 1;
    let mut out = vec![Term::var(&format!("x{fresh}"))];
    for &c in cons {
        let n = sig.arity(c);
        if n == 0 {
            out.push(Term::constant(c));
        } else if depth > 0 {
            let sub: Vec<Vec<Term>> = (0..n)
                .map(|_| patterns(sig, cons, depth - 1, fresh))
                .collect();
            cartesian(&sub, &mut Vec::new(), &mut |args| {
                out.push(Term::App(c, args.to_vec()));
            });
        }
    }
    out
}

fn cartesian(lists: &[Vec<Term>], acc: &mut Vec<Term>, emit: &mut dyn FnMut(&[Term])) {
    if acc.len() == lists.len() {
        emit(acc);
        return;
    }
    for t in &lists[acc.len()] {
        acc.push(t.clone());
        cartesian(lists, acc, emit);
        acc.pop();
    }
}

fn rename(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::var(&format!("{}#", v.name())),
        Term::App(f, args) => Term::App(*f, args.iter().map(rename).collect()),
    }
}

/// Syntactic unifiability with occurs check.
fn unifiable(a: &Term, b: &Term) -> bool {
    let mut sigma = Substitution::new();
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((s, t)) = work.pop() {
        let s = resolve(&sigma, &s);
        let t = resolve(&sigma, &t);
        match (&s, &t) {
            _ if s == t => {}
            (Term::Var(v), other) | (other, Term::Var(v)) => {
                if occurs(&sigma, v, other) {
                    return false;
                }
                sigma.insert(v.clone(), other.clone());
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return false;
                }
                work.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
        }
    }
    true
}

fn resolve(sigma: &Substitution, t: &Term) -> Term {
    match t {
        Term::Var(v) => match sigma.get(v) {
            Some(u) => resolve(sigma, u),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| resolve(sigma, a)).collect()),
    }
}

fn occurs(sigma: &Substitution, v: &Var, t: &Term) -> bool {
    match resolve(sigma, t) {
        Term::Var(w) => &w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(sigma, v, a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, numeral, term};

    #[test]
    fn fib_successors() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        assert_eq!(
            successors(&term(sig, "fib(s(0))"), &trs, Strategy::Innermost),
            vec![term(sig, "dfib(s(0),0)")]
        );
        assert!(successors(&term(sig, "0"), &trs, Strategy::Innermost).is_empty());
        assert_eq!(
            successors(&term(sig, "dfib(s(s(0)),0)"), &trs, Strategy::Innermost),
            vec![term(sig, "dfib(s(0),dfib(0,0))")]
        );
    }

    #[test]
    fn innermost_skips_outer_redex() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let t = term(sig, "dfib(0,fib(0))");
        let inner = successors(&t, &trs, Strategy::Innermost);
        assert_eq!(inner, vec![term(sig, "dfib(0,dfib(0,0))")]);
        let full = successors(&t, &trs, Strategy::Full);
        assert_eq!(full.len(), 2);
        assert!(full.contains(&term(sig, "s(fib(0))")));
    }

    #[test]
    fn fib_heights() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let h = |t: Term| derivation_height(&t, &trs, Strategy::Innermost, Budget::default());
        let r = h(term(sig, "fib(0)"));
        assert_eq!(r.height, 2);
        assert_eq!(
            r.witness,
            vec![term(sig, "fib(0)"), term(sig, "dfib(0,0)"), term(sig, "s(0)")]
        );
        assert!(!r.truncated);
        let fib6 = Term::app(sig.get("fib").unwrap(), vec![numeral(sig, 6)]);
        assert_eq!(h(fib6).height, 26);
        assert_eq!(h(term(sig, "s(0)")).height, 0);
    }

    #[test]
    fn witness_is_a_derivation() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let t = Term::app(sig.get("fib").unwrap(), vec![numeral(sig, 4)]);
        let r = derivation_height(&t, &trs, Strategy::Innermost, Budget::default());
        assert_eq!(r.witness.len(), r.height + 1);
        for w in r.witness.windows(2) {
            assert!(successors(&w[0], &trs, Strategy::Innermost).contains(&w[1]));
        }
    }

    #[test]
    fn memo_matches_plain_search() {
        // the unmemoized tree search blows up on larger duplicating starts
        for (trs, max) in [(fixtures::fib(), 5), (fixtures::arith(), 5), (fixtures::dup(), 4)] {
            let sig = &trs.signature;
            let cons = constructor_terms_by_size(sig, 4);
            for n in 1..=max {
                for t in basic_terms_of_size(sig, &cons, n) {
                    for strategy in [Strategy::Innermost, Strategy::Full] {
                        let memo = derivation_height(&t, &trs, strategy, Budget::default());
                        let plain = derivation_height(
                            &t,
                            &trs,
                            strategy,
                            Budget {
                                memoize: false,
                                ..Budget::default()
                            },
                        );
                        assert!(!memo.truncated && !plain.truncated, "{}", t.display(sig));
                        assert_eq!(memo.height, plain.height, "{}", t.display(sig));
                    }
                }
            }
        }
    }

    #[test]
    fn budget_truncates_explicitly() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let t = Term::app(sig.get("fib").unwrap(), vec![numeral(sig, 6)]);
        let budget = Budget {
            node_budget: 5,
            ..Budget::default()
        };
        let r = derivation_height(&t, &trs, Strategy::Innermost, budget);
        assert!(r.truncated);
        assert!(r.height <= 26);
        let r = derivation_height(
            &t,
            &trs,
            Strategy::Innermost,
            Budget {
                size_budget: 3,
                ..Budget::default()
            },
        );
        assert!(r.truncated);
    }

    #[test]
    fn cycles_are_flagged() {
        let trs = crate::term::parse_trs("(RULES a -> b b -> a)").unwrap();
        let sig = &trs.signature;
        let r = derivation_height(&term(sig, "a"), &trs, Strategy::Full, Budget::default());
        assert!(r.truncated);
    }

    #[test]
    fn rc_table_for_fib() {
        let trs = fixtures::fib();
        let rows = empirical_rc(Rewriter::new(&trs, Strategy::Innermost), 3, Budget::default());
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].height, 0);
        assert!(rows[0].witness.is_none());
        assert_eq!(rows[1].height, 2);
        assert_eq!(
            rows[1].witness.as_ref().unwrap().start,
            term(&trs.signature, "fib(0)")
        );
    }

    #[test]
    fn rc_table_without_rules_is_zero() {
        let mut sig = Signature::new();
        sig.add("0", 0, SymbolKind::Constructor).unwrap();
        sig.add("s", 1, SymbolKind::Constructor).unwrap();
        let trs = Trs::new(sig, Vec::new()).unwrap();
        let rows = empirical_rc(Rewriter::new(&trs, Strategy::Full), 4, Budget::default());
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.height == 0 && !r.truncated));

        let empty = crate::term::parse_trs("(RULES)").unwrap();
        let rows = empirical_rc(Rewriter::new(&empty, Strategy::Full), 3, Budget::default());
        assert!(rows.iter().all(|r| r.height == 0));
    }

    #[test]
    fn rc_table_needs_a_constant() {
        let trs = crate::term::parse_trs("(VAR x)(RULES f(s(x)) -> x)").unwrap();
        let rows = empirical_rc(Rewriter::new(&trs, Strategy::Full), 4, Budget::default());
        assert!(rows.is_empty());
    }

    #[test]
    fn bottom_completion_of_fib() {
        let trs = fixtures::fib();
        let (ext, bottom) = bottom_complete(&trs, 1);
        let sig = &ext.signature;
        let added: Vec<String> = ext.rules[trs.rules.len()..]
            .iter()
            .map(|r| r.lhs.display(sig).to_string())
            .collect();
        assert!(added.iter().all(|l| l.contains(BOTTOM_NAME)), "{added:?}");
        assert!(added.iter().all(|l| l.starts_with("dfib")), "{added:?}");
        assert!(
            added.iter().any(|l| l.starts_with(&format!("dfib({BOTTOM_NAME},x"))),
            "{added:?}"
        );
        assert!(!sig.is_defined(bottom));
        assert_eq!(sig.defined().count(), 2);
    }

    #[test]
    fn bottom_completion_of_partial_symbol() {
        let trs = fixtures::partial();
        let (ext, _) = bottom_complete(&trs, 1);
        let sig = &ext.signature;
        let mut added: Vec<String> = ext.rules[1..]
            .iter()
            .map(|r| r.lhs.display(sig).to_string())
            .collect();
        added.sort();
        assert_eq!(added, vec!["g(s(x2))".to_string(), format!("g({BOTTOM_NAME})")]);
    }

    #[test]
    fn bottom_completion_of_empty_system() {
        let trs = crate::term::parse_trs("(RULES)").unwrap();
        let (ext, bottom) = bottom_complete(&trs, 2);
        assert!(ext.rules.is_empty());
        assert_eq!(ext.signature.len(), 1);
        assert_eq!(ext.signature.name(bottom), BOTTOM_NAME);
    }

    #[test]
    fn bottom_completion_is_complete_within_cap() {
        for trs in [fixtures::fib(), fixtures::partial(), fixtures::arith(), fixtures::ack()] {
            let (ext, _) = bottom_complete(&trs, 1);
            let sig = &ext.signature;
            let cons = constructor_terms_by_size(sig, 6);
            for n in 1..=6 {
                for t in basic_terms_of_size(sig, &cons, n) {
                    if t.args().iter().all(|a| a.depth() <= 1) {
                        let root = successors(&t, &ext, Strategy::Innermost);
                        assert!(!root.is_empty(), "{} irreducible", t.display(sig));
                    }
                }
            }
        }
    }

    #[test]
    fn on_the_fly_bottom_rule() {
        let trs = fixtures::partial();
        let (ext, bottom) = bottom_complete(&trs, 0);
        let sig = &ext.signature;
        let rw = Rewriter::new(&ext, Strategy::Innermost).with_bottom(bottom);
        let t = term(sig, "g(s(s(0)))");
        assert_eq!(rw.successors(&t), vec![Term::constant(bottom)]);
        assert!(rw.is_normal_form(&Term::constant(bottom)));
    }

    #[test]
    fn unification() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        assert!(unifiable(&term(sig, "dfib(s(x),y)"), &term(sig, "dfib(z,0)")));
        assert!(!unifiable(&term(sig, "dfib(0,y)"), &term(sig, "dfib(s(z),w)")));
        assert!(!unifiable(&term(sig, "x"), &term(sig, "s(x)")));
    }
}
