//! The exponential path order `≻epo*`, its certificates and the predicative
//! interpretation into the auxiliary order on sequences.
//!
//! A [`Certificate`] bundles a precedence, a safe mapping and an argument
//! permutation `μ`. Every comparison permutes the arguments of both terms by
//! `μ` first and then classifies positions with the permuted safe mapping,
//! so `epostar_gt(s, t, cert)` decides `μ(s) ≻epo* μ(t)`.

mod certificate;
mod predicative;

pub use certificate::{
    ArgPermutation, Certificate, CertificateError, CertificateFileError, SafeMapping,
};
pub use predicative::{in_tn, InterpretError, PredicativeSignature};

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::term::{Signature, Symbol, Term, Trs};

/// The order for one certificate, on terms that have already been permuted.
pub struct EpoStar<'a> {
    sig: &'a Signature,
    cert: &'a Certificate,
    /// Safe flags by permuted position.
    safe: Vec<Vec<bool>>,
    memo_gt: RefCell<HashMap<(Term, Term), bool>>,
    memo_sub: RefCell<HashMap<(Term, Term), bool>>,
}

impl<'a> EpoStar<'a> {
    pub fn new(sig: &'a Signature, cert: &'a Certificate) -> Self {
        let safe = sig
            .symbols()
            .map(|f| cert.permuted_safe_flags(sig, f))
            .collect();
        EpoStar {
            sig,
            cert,
            safe,
            memo_gt: RefCell::new(HashMap::new()),
            memo_sub: RefCell::new(HashMap::new()),
        }
    }

    /// Applies `μ` to every node of `t`.
    pub fn permute(&self, t: &Term) -> Term {
        self.cert.mu.apply(t)
    }

    fn is_safe(&self, f: Symbol, pos: usize) -> bool {
        self.safe[f.index()][pos]
    }

    fn normal_args<'t>(&self, f: Symbol, args: &'t [Term]) -> Vec<&'t Term> {
        args.iter()
            .enumerate()
            .filter(|(i, _)| !self.is_safe(f, *i))
            .map(|(_, a)| a)
            .collect()
    }

    /// `s ≈s t` on permuted terms.
    pub fn eqv(&self, s: &Term, t: &Term) -> bool {
        match (s, t) {
            (Term::App(f, xs), Term::App(g, ys)) => {
                xs.len() == ys.len()
                    && self.cert.precedence.equiv(*f, *g)
                    && self.safe[f.index()] == self.safe[g.index()]
                    && xs.iter().zip(ys).all(|(x, y)| self.eqv(x, y))
            }
            _ => s == t,
        }
    }

    /// `s ⊐ t` on permuted terms.
    pub fn sub_gt(&self, s: &Term, t: &Term) -> bool {
        let Term::App(f, args) = s else {
            return false;
        };
        let key = (s.clone(), t.clone());
        if let Some(&r) = self.memo_sub.borrow().get(&key) {
            return r;
        }
        let defined = self.sig.is_defined(*f);
        let r = args.iter().enumerate().any(|(i, a)| {
            (!defined || !self.is_safe(*f, i)) && (self.eqv(a, t) || self.sub_gt(a, t))
        });
        self.memo_sub.borrow_mut().insert(key, r);
        r
    }

    /// `s ≻epo* t` on permuted terms.
    pub fn gt(&self, s: &Term, t: &Term) -> bool {
        let key = (s.clone(), t.clone());
        if let Some(&r) = self.memo_gt.borrow().get(&key) {
            return r;
        }
        let r = self.case1(s, t).is_ok() || self.case2(s, t).is_ok() || self.case3(s, t).is_ok();
        self.memo_gt.borrow_mut().insert(key, r);
        r
    }

    pub fn ge(&self, s: &Term, t: &Term) -> bool {
        self.eqv(s, t) || self.gt(s, t)
    }

    fn case1(&self, s: &Term, t: &Term) -> Result<(), Option<usize>> {
        if s.args().iter().any(|a| self.ge(a, t)) {
            Ok(())
        } else {
            Err(None)
        }
    }

    /// On failure, returns the permuted position of the first argument of
    /// `t` that could not be dominated.
    fn case2(&self, s: &Term, t: &Term) -> Result<(), Option<usize>> {
        let (Term::App(f, _), Term::App(g, ts)) = (s, t) else {
            return Err(None);
        };
        if !self.cert.precedence.gt(*f, *g) {
            return Err(None);
        }
        for (j, tj) in ts.iter().enumerate() {
            let ok = if self.is_safe(*g, j) {
                self.gt(s, tj)
            } else {
                self.sub_gt(s, tj)
            };
            if !ok {
                return Err(Some(j));
            }
        }
        Ok(())
    }

    fn case3(&self, s: &Term, t: &Term) -> Result<(), Option<usize>> {
        let (Term::App(f, ss), Term::App(g, ts)) = (s, t) else {
            return Err(None);
        };
        if !self.cert.precedence.equiv(*f, *g) {
            return Err(None);
        }
        for (j, tj) in ts.iter().enumerate() {
            if self.is_safe(*g, j) && !self.gt(s, tj) {
                return Err(Some(j));
            }
        }
        let s_nrm = self.normal_args(*f, ss);
        let t_nrm = self.normal_args(*g, ts);
        let mut bad = None;
        for i in 0..s_nrm.len().min(t_nrm.len()) {
            if self.sub_gt(s_nrm[i], t_nrm[i]) {
                match t_nrm[i + 1..].iter().position(|u| !self.sub_gt(s, u)) {
                    None => return Ok(()),
                    Some(j) => {
                        bad.get_or_insert(i + 1 + j);
                    }
                }
            }
            if !self.eqv(s_nrm[i], t_nrm[i]) {
                bad.get_or_insert(i);
                break;
            }
        }
        let bad = bad.unwrap_or(s_nrm.len().min(t_nrm.len()));
        let pos = (0..ts.len()).filter(|&j| !self.is_safe(*g, j)).nth(bad);
        Err(pos)
    }

    fn explain(&self, s: &Term, t: &Term) -> FailureTrace {
        let case = match (s, t) {
            (Term::App(f, _), Term::App(g, _)) if self.cert.precedence.gt(*f, *g) => 2,
            (Term::App(f, _), Term::App(g, _)) if self.cert.precedence.equiv(*f, *g) => 3,
            _ => 1,
        };
        let position = match case {
            2 => self.case2(s, t).err().flatten(),
            3 => self.case3(s, t).err().flatten(),
            _ => None,
        };
        // translate the permuted position back to the rule's own numbering
        let position = match (t, position) {
            (Term::App(g, _), Some(p)) => Some(self.cert.mu.original_position(*g, p + 1)),
            _ => None,
        };
        FailureTrace { case, position }
    }
}

/// Why a rule was not oriented: the outermost case that applied to the root
/// symbols and, for cases 2 and 3, the argument of the right-hand side (in
/// original 1-based numbering) where the comparison broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FailureTrace {
    pub case: u8,
    pub position: Option<usize>,
}

impl fmt::Display for FailureTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some(p) => write!(f, "case {} failed at argument {}", self.case, p),
            None => write!(f, "case {} failed", self.case),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVerdict {
    pub rule: usize,
    pub oriented: bool,
    pub trace: Option<FailureTrace>,
}

/// Result of [`check_certificate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub constructor_system: bool,
    pub certificate_errors: Vec<CertificateError>,
    /// Empty when the certificate itself is malformed.
    pub rules: Vec<RuleVerdict>,
}

impl CheckReport {
    pub fn compatible(&self) -> bool {
        self.constructor_system
            && self.certificate_errors.is_empty()
            && self.rules.iter().all(|r| r.oriented)
    }
}

/// `s ≈s t` after permuting both terms.
pub fn eqv_safe(s: &Term, t: &Term, sig: &Signature, cert: &Certificate) -> bool {
    let o = EpoStar::new(sig, cert);
    o.eqv(&o.permute(s), &o.permute(t))
}

/// `s ⊐ t` after permuting both terms.
pub fn subepostar_gt(s: &Term, t: &Term, sig: &Signature, cert: &Certificate) -> bool {
    let o = EpoStar::new(sig, cert);
    o.sub_gt(&o.permute(s), &o.permute(t))
}

/// `s ≻epo* t` after permuting both terms.
pub fn epostar_gt(s: &Term, t: &Term, sig: &Signature, cert: &Certificate) -> bool {
    let o = EpoStar::new(sig, cert);
    o.gt(&o.permute(s), &o.permute(t))
}

/// Checks that `trs` is a constructor system, that `cert` is well formed for
/// it, and orients every rule.
pub fn check_certificate(trs: &Trs, cert: &Certificate) -> CheckReport {
    let sig = &trs.signature;
    let certificate_errors = cert.validate(sig);
    let mut rules = Vec::new();
    if certificate_errors.is_empty() {
        let o = EpoStar::new(sig, cert);
        for (i, rule) in trs.rules.iter().enumerate() {
            let l = o.permute(&rule.lhs);
            let r = o.permute(&rule.rhs);
            let oriented = o.gt(&l, &r);
            rules.push(RuleVerdict {
                rule: i,
                oriented,
                trace: (!oriented).then(|| o.explain(&l, &r)),
            });
        }
    }
    CheckReport {
        constructor_system: trs.is_constructor_system(),
        certificate_errors,
        rules,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epo::Precedence;
    use crate::fixtures::{self, term};

    pub(crate) fn fib_cert(sig: &Signature) -> Certificate {
        let prec = Precedence::from_chain(sig, "fib > dfib > s = 0").unwrap();
        let mut cert = Certificate::with_defaults(sig, prec);
        cert.safe.set(sig.get("dfib").unwrap(), vec![2]);
        cert
    }

    fn dup_cert(sig: &Signature) -> Certificate {
        let prec = Precedence::from_chain(sig, "f > d > c, s, 0").unwrap();
        let mut cert = Certificate::with_defaults(sig, prec);
        cert.safe.set(sig.get("d").unwrap(), vec![1]);
        cert.safe.set(sig.get("f").unwrap(), vec![2]);
        cert
    }

    #[test]
    fn fib_is_oriented() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let cert = fib_cert(sig);
        assert!(epostar_gt(&term(sig, "fib(x)"), &term(sig, "dfib(x,0)"), sig, &cert));
        assert!(epostar_gt(
            &term(sig, "dfib(s(s(x)),y)"),
            &term(sig, "dfib(s(x),dfib(x,y))"),
            sig,
            &cert
        ));
        assert!(!epostar_gt(&term(sig, "0"), &term(sig, "s(0)"), sig, &cert));
        let report = check_certificate(&trs, &cert);
        assert!(report.compatible(), "{report:?}");
        assert_eq!(report.rules.len(), 4);
    }

    #[test]
    fn dup_is_oriented() {
        let trs = fixtures::dup();
        let cert = dup_cert(&trs.signature);
        let report = check_certificate(&trs, &cert);
        assert!(report.compatible(), "{report:?}");
    }

    #[test]
    fn single_class_is_not_admissible() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "fib = dfib = s = 0").unwrap();
        let report = check_certificate(&trs, &Certificate::with_defaults(sig, prec));
        assert!(!report.compatible());
        assert!(matches!(
            report.certificate_errors[0],
            CertificateError::NotAdmissible { .. }
        ));
    }

    #[test]
    fn sub_order_examples() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let cert = fib_cert(sig);
        let sub = |s: &str, t: &str| subepostar_gt(&term(sig, s), &term(sig, t), sig, &cert);
        assert!(sub("dfib(s(x),y)", "x"));
        assert!(!sub("dfib(x,s(y))", "y"));
        assert!(!sub("x", "x"));
        assert!(sub("s(s(x))", "x"));
    }

    #[test]
    fn safe_equivalence_examples() {
        let trs = crate::term::parse_trs("(VAR x)(RULES h(x) -> a(b(0)))").unwrap();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "h > a = b = 0").unwrap();
        let mut cert = Certificate::with_defaults(sig, prec);
        let t = term(sig, "a(0)");
        let u = term(sig, "b(0)");
        assert!(eqv_safe(&t, &t, sig, &cert));
        assert!(eqv_safe(&t, &u, sig, &cert));
        // pretend a and b are defined to give them different safe sets
        let mut sig2 = sig.clone();
        sig2.set_kind(sig.get("a").unwrap(), crate::term::SymbolKind::Defined);
        sig2.set_kind(sig.get("b").unwrap(), crate::term::SymbolKind::Defined);
        cert.safe.set(sig.get("a").unwrap(), vec![1]);
        cert.safe.set(sig.get("b").unwrap(), vec![]);
        assert!(!eqv_safe(&t, &u, &sig2, &cert));
    }

    #[test]
    fn failure_traces() {
        let trs = fixtures::ack();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "ack > s = 0").unwrap();
        let cert = Certificate::with_defaults(sig, prec);
        let report = check_certificate(&trs, &cert);
        assert!(!report.compatible());
        let last = &report.rules[2];
        assert!(!last.oriented);
        assert_eq!(last.trace.unwrap().case, 3);
        assert_eq!(last.trace.unwrap().position, Some(2));
    }

    #[test]
    fn permutation_is_applied() {
        // swapping the arguments of a flips which one must decrease
        let trs = crate::term::parse_trs("(VAR x y)(RULES a(x,s(y)) -> a(y,y))").unwrap();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "a > s").unwrap();
        let cert = Certificate::with_defaults(sig, prec.clone());
        assert!(!check_certificate(&trs, &cert).compatible());
        let mut cert = Certificate::with_defaults(sig, prec);
        cert.mu.set(sig.get("a").unwrap(), vec![2, 1]);
        assert!(check_certificate(&trs, &cert).compatible());
    }

    #[test]
    fn non_constructor_systems_are_rejected() {
        let trs = crate::term::parse_trs("(VAR x)(RULES f(f(x)) -> x)").unwrap();
        let sig = &trs.signature;
        let prec = Precedence::from_chain(sig, "f").unwrap();
        let report = check_certificate(&trs, &Certificate::with_defaults(sig, prec));
        assert!(!report.constructor_system);
        assert!(!report.compatible());
    }
}
