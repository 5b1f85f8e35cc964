use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use super::formula::{Formula, FormulaBuilder};
use super::{eq_atom, level_width, Atom};
use crate::epo::Precedence;
use crate::epostar::Certificate;
use crate::term::{Signature, Symbol, Term, Trs};

/// Builds constraint formulas over the atom space of one signature.
///
/// Subformulas are memoized per term pair, so encoding the same comparison
/// twice returns the same node.
pub struct Encoder<'a> {
    sig: &'a Signature,
    pub builder: FormulaBuilder,
    equiv_memo: HashMap<(Term, Term), Formula>,
    sub_memo: HashMap<(Term, Term), Formula>,
    gt_memo: HashMap<(Term, Term), Formula>,
    lex_memo: HashMap<(Term, Term, usize), Formula>,
}

impl<'a> Encoder<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Encoder {
            sig,
            builder: FormulaBuilder::new(),
            equiv_memo: HashMap::new(),
            sub_memo: HashMap::new(),
            gt_memo: HashMap::new(),
            lex_memo: HashMap::new(),
        }
    }

    pub fn signature(&self) -> &'a Signature {
        self.sig
    }

    /// Strict precedence: an atom for distinct defined symbols, otherwise
    /// true exactly when a defined symbol is compared with a constructor.
    pub fn prec_gt(&mut self, f: Symbol, g: Symbol) -> Formula {
        match (self.sig.is_defined(f), self.sig.is_defined(g)) {
            (true, true) if f != g => self.builder.atom(Atom::Gt(f, g)),
            (true, false) => self.builder.top(),
            _ => self.builder.bottom(),
        }
    }

    /// Precedence equivalence. Constructors are all equivalent; defined
    /// symbols of different arity never are.
    pub fn prec_eq(&mut self, f: Symbol, g: Symbol) -> Formula {
        if f == g {
            return self.builder.top();
        }
        match (self.sig.is_defined(f), self.sig.is_defined(g)) {
            (true, true) if self.sig.arity(f) == self.sig.arity(g) => {
                self.builder.atom(eq_atom(f, g))
            }
            (false, false) => self.builder.top(),
            _ => self.builder.bottom(),
        }
    }

    pub fn safe(&mut self, f: Symbol, i: usize) -> Formula {
        if self.sig.is_defined(f) {
            self.builder.atom(Atom::Safe(f, i))
        } else {
            self.builder.top()
        }
    }

    pub fn mu(&mut self, f: Symbol, i: usize, k: usize) -> Formula {
        self.builder.atom(Atom::Mu(f, i, k))
    }

    /// `⟦s ≈ t⟧`, respecting the argument permutation.
    pub fn encode_equiv(&mut self, s: &Term, t: &Term) -> Formula {
        if s == t {
            return self.builder.top();
        }
        let key = (s.clone(), t.clone());
        if let Some(&f) = self.equiv_memo.get(&key) {
            return f;
        }
        let r = match (s, t) {
            (Term::App(f, ss), Term::App(g, ts)) if ss.len() == ts.len() => {
                let n = ss.len();
                let mut parts = vec![self.prec_eq(*f, *g)];
                for i in 1..=n {
                    for j in 1..=n {
                        let sub = self.encode_equiv(&ss[i - 1], &ts[j - 1]);
                        for k in 1..=n {
                            let guard = [self.mu(*f, i, k), self.mu(*g, j, k)];
                            let guard = self.builder.and(guard);
                            parts.push(self.builder.implies(guard, sub));
                        }
                    }
                }
                self.builder.and(parts)
            }
            _ => self.builder.bottom(),
        };
        self.equiv_memo.insert(key, r);
        r
    }

    /// `⟦s ⊐ t⟧`.
    pub fn encode_subepostar(&mut self, s: &Term, t: &Term) -> Formula {
        let Term::App(f, ss) = s else {
            return self.builder.bottom();
        };
        let key = (s.clone(), t.clone());
        if let Some(&r) = self.sub_memo.get(&key) {
            return r;
        }
        let mut alts = Vec::new();
        for (i, si) in ss.iter().enumerate() {
            let guard = if self.sig.is_defined(*f) {
                let sf = self.safe(*f, i + 1);
                self.builder.not(sf)
            } else {
                self.builder.top()
            };
            let below = self.encode_subepostar(si, t);
            let same = self.encode_equiv(si, t);
            let body = self.builder.or2(below, same);
            alts.push(self.builder.and2(guard, body));
        }
        let r = self.builder.or(alts);
        self.sub_memo.insert(key, r);
        r
    }

    /// `⟦s ≻epo* t⟧`.
    pub fn encode_epostar(&mut self, s: &Term, t: &Term) -> Formula {
        let Term::App(f, ss) = s else {
            return self.builder.bottom();
        };
        let key = (s.clone(), t.clone());
        if let Some(&r) = self.gt_memo.get(&key) {
            return r;
        }
        let mut alts = Vec::new();
        for si in ss {
            let gt = self.encode_epostar(si, t);
            let eq = self.encode_equiv(si, t);
            alts.push(self.builder.or2(gt, eq));
        }
        if let Term::App(g, ts) = t {
            let gt = self.prec_gt(*f, *g);
            let eq = self.prec_eq(*f, *g);
            let lex = self.encode_lex(s, t, 1);
            let eq_lex = self.builder.and2(eq, lex);
            let mut parts = vec![self.builder.or2(gt, eq_lex)];
            for (j, tj) in ts.iter().enumerate() {
                let safe = self.safe(*g, j + 1);
                let unsafe_ = self.builder.not(safe);
                let whole = self.encode_epostar(s, tj);
                let sub = self.encode_subepostar(s, tj);
                parts.push(self.builder.implies(safe, whole));
                parts.push(self.builder.implies(unsafe_, sub));
            }
            alts.push(self.builder.and(parts));
        }
        let r = self.builder.or(alts);
        self.gt_memo.insert(key, r);
        r
    }

    /// `⟦s ≻lex_k t⟧`: walks permuted positions from `k`, skipping safe ones,
    /// until a normal position decreases strictly.
    pub fn encode_lex(&mut self, s: &Term, t: &Term, k: usize) -> Formula {
        let (Term::App(f, ss), Term::App(g, ts)) = (s, t) else {
            return self.builder.bottom();
        };
        let n = ss.len();
        if ts.len() != n || k > n {
            return self.builder.bottom();
        }
        let key = (s.clone(), t.clone(), k);
        if let Some(&r) = self.lex_memo.get(&key) {
            return r;
        }
        let next = self.encode_lex(s, t, k + 1);
        let mut parts = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                let guard = [self.mu(*f, i, k), self.mu(*g, j, k)];
                let guard = self.builder.and(guard);
                let safe = self.safe(*f, i);
                let normal = self.builder.not(safe);
                let skip = self.builder.implies(safe, next);
                let strict = self.encode_subepostar(&ss[i - 1], &ts[j - 1]);
                let same = self.encode_equiv(&ss[i - 1], &ts[j - 1]);
                let same_then = self.builder.and2(same, next);
                let step = self.builder.or2(strict, same_then);
                let step = self.builder.implies(normal, step);
                let body = self.builder.and2(skip, step);
                parts.push(self.builder.implies(guard, body));
            }
        }
        let r = self.builder.and(parts);
        self.lex_memo.insert(key, r);
        r
    }

    fn level_bits(&mut self, f: Symbol) -> Vec<Formula> {
        let w = level_width(self.sig.defined().count());
        (0..w).map(|b| self.builder.atom(Atom::Level(f, b))).collect()
    }

    fn level_gt(&mut self, f: Symbol, g: Symbol) -> Formula {
        let (a, b) = (self.level_bits(f), self.level_bits(g));
        // from the least significant bit upwards
        let mut gt = self.builder.bottom();
        for (x, y) in a.into_iter().zip(b) {
            let ny = self.builder.not(y);
            let here = self.builder.and2(x, ny);
            let same = self.builder.iff(x, y);
            let rest = self.builder.and2(same, gt);
            gt = self.builder.or2(here, rest);
        }
        gt
    }

    fn level_eq(&mut self, f: Symbol, g: Symbol) -> Formula {
        let (a, b) = (self.level_bits(f), self.level_bits(g));
        let parts: Vec<Formula> = a.into_iter().zip(b).map(|(x, y)| self.builder.iff(x, y)).collect();
        self.builder.and(parts)
    }

    fn exactly_one(&mut self, lits: Vec<Formula>) -> Formula {
        let mut parts = vec![self.builder.or(lits.clone())];
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                let both = self.builder.and2(a, b);
                parts.push(self.builder.not(both));
            }
        }
        self.builder.and(parts)
    }

    /// `COMPAT ∧ PRECEDENCE ∧ BIJECTION`.
    pub fn encode_axioms(&mut self) -> Formula {
        let sorted = self.sig.sorted_by_name();
        let defined: Vec<Symbol> = sorted.iter().copied().filter(|&f| self.sig.is_defined(f)).collect();
        let mut parts = Vec::new();
        for &f in &defined {
            for &g in &defined {
                if f != g {
                    let atom = self.prec_gt(f, g);
                    let levels = self.level_gt(f, g);
                    parts.push(self.builder.iff(atom, levels));
                }
            }
        }
        for (x, &f) in defined.iter().enumerate() {
            for &g in &defined[x + 1..] {
                let eq = self.prec_eq(f, g);
                let levels = self.level_eq(f, g);
                parts.push(self.builder.iff(eq, levels));
                let n = self.sig.arity(f);
                if n != self.sig.arity(g) {
                    continue;
                }
                let mut same_safe = Vec::new();
                for i in 1..=n {
                    for j in 1..=n {
                        let agree = [self.safe(f, i), self.safe(g, j)];
                        let agree = self.builder.iff(agree[0], agree[1]);
                        for k in 1..=n {
                            let guard = [self.mu(f, i, k), self.mu(g, j, k)];
                            let guard = self.builder.and(guard);
                            same_safe.push(self.builder.implies(guard, agree));
                        }
                    }
                }
                let same_safe = self.builder.and(same_safe);
                parts.push(self.builder.implies(eq, same_safe));
            }
        }
        for &f in &sorted {
            let n = self.sig.arity(f);
            for i in 1..=n {
                let row = (1..=n).map(|k| self.mu(f, i, k)).collect();
                parts.push(self.exactly_one(row));
            }
            for k in 1..=n {
                let col = (1..=n).map(|i| self.mu(f, i, k)).collect();
                parts.push(self.exactly_one(col));
            }
        }
        self.builder.and(parts)
    }

    /// The full constraint: axioms and one orientation per rule.
    pub fn encode_trs(&mut self, trs: &Trs) -> Formula {
        let mut parts = vec![self.encode_axioms()];
        for rule in &trs.rules {
            parts.push(self.encode_epostar(&rule.lhs, &rule.rhs));
        }
        self.builder.and(parts)
    }

    /// Unit constraints fixing every atom to the value it has under `cert`.
    /// Levels are taken from the ranks of defined symbols, shifted so the
    /// lowest defined rank gets level 0.
    pub fn assert_certificate(&mut self, cert: &Certificate) -> Formula {
        let value = certificate_assignment(self.sig, cert);
        let atoms = super::atom_space(self.sig);
        let mut parts = Vec::new();
        for a in atoms {
            let f = self.builder.atom(a);
            parts.push(if value(a) { f } else { self.builder.not(f) });
        }
        self.builder.and(parts)
    }
}

/// The atom values that describe `cert`. Defined ranks are compressed to
/// consecutive levels; constructors play no part in levels.
pub fn certificate_assignment<'c>(
    sig: &Signature,
    cert: &'c Certificate,
) -> impl Fn(Atom) -> bool + 'c {
    let mut ranks: Vec<u64> = sig.defined().map(|f| cert.precedence.rank_of(f)).collect();
    ranks.sort_unstable();
    ranks.dedup();
    let level: HashMap<Symbol, usize> = sig
        .defined()
        .map(|f| {
            let r = cert.precedence.rank_of(f);
            (f, ranks.binary_search(&r).unwrap())
        })
        .collect();
    move |a| match a {
        Atom::Gt(f, g) => cert.precedence.gt(f, g),
        Atom::Eq(f, g) => cert.precedence.equiv(f, g),
        Atom::Safe(f, i) => cert.safe.is_safe(f, i),
        Atom::Mu(f, i, k) => cert.mu.get(f).get(i - 1) == Some(&k),
        Atom::Level(f, b) => (level[&f] >> b) & 1 == 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("model violates the axioms: {0}")]
pub struct DecodeError(pub String);

/// Reads a certificate out of an assignment to the atoms.
///
/// Constructors form one class of rank 0; defined symbols with equal level
/// share a class of rank `level + 1`.
pub fn decode_model(sig: &Signature, value: &dyn Fn(Atom) -> bool) -> Result<Certificate, DecodeError> {
    let w = level_width(sig.defined().count());
    let level = |f: Symbol| -> u64 {
        (0..w).filter(|&b| value(Atom::Level(f, b))).map(|b| 1u64 << b).sum()
    };
    let defined: Vec<Symbol> = sig.defined().collect();
    for &f in &defined {
        for &g in &defined {
            if f == g {
                continue;
            }
            if value(Atom::Gt(f, g)) != (level(f) > level(g)) {
                return Err(DecodeError(format!(
                    "gt({},{}) disagrees with the levels",
                    sig.name(f),
                    sig.name(g)
                )));
            }
            let same = level(f) == level(g);
            let eq = sig.arity(f) == sig.arity(g) && value(eq_atom(f, g));
            if eq != same {
                return Err(DecodeError(format!(
                    "eq({},{}) disagrees with the levels",
                    sig.name(f),
                    sig.name(g)
                )));
            }
        }
    }
    let mut classes: BTreeMap<u64, Vec<Symbol>> = BTreeMap::new();
    for &f in &defined {
        classes.entry(level(f)).or_default().push(f);
    }
    let mut classes_by_rank: Vec<(String, u64, Vec<Symbol>)> = Vec::new();
    let cons: Vec<Symbol> = sig.constructors().collect();
    if !cons.is_empty() {
        classes_by_rank.push(("constructors".to_string(), 0, cons));
    }
    for (l, members) in classes {
        classes_by_rank.push((format!("level{l}"), l + 1, members));
    }
    let precedence =
        Precedence::new(sig, classes_by_rank).map_err(|e| DecodeError(e.to_string()))?;
    let mut cert = Certificate::with_defaults(sig, precedence);
    for f in sig.symbols() {
        let n = sig.arity(f);
        if sig.is_defined(f) {
            cert.safe
                .set(f, (1..=n).filter(|&i| value(Atom::Safe(f, i))).collect());
        }
        let mut images = Vec::with_capacity(n);
        for i in 1..=n {
            let targets: Vec<usize> = (1..=n).filter(|&k| value(Atom::Mu(f, i, k))).collect();
            match targets.as_slice() {
                [k] => images.push(*k),
                _ => {
                    return Err(DecodeError(format!(
                        "position {i} of {} has {} images",
                        sig.name(f),
                        targets.len()
                    )))
                }
            }
        }
        cert.mu.set(f, images);
    }
    if let Some(e) = cert.validate(sig).into_iter().next() {
        return Err(DecodeError(e.to_string()));
    }
    Ok(cert)
}
