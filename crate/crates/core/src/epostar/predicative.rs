use thiserror::Error;

use super::SafeMapping;
use crate::epo::{Precedence, TermSequence};
use crate::term::{Signature, Symbol, SymbolKind, Term};

/// Membership in `T_n`: constructor terms, and terms whose normal arguments
/// are constructor terms and whose safe arguments are again in `T_n`.
pub fn in_tn(t: &Term, sig: &Signature, safe: &SafeMapping) -> bool {
    if t.is_constructor_term(sig) {
        return true;
    }
    match t {
        Term::Var(_) => true,
        Term::App(f, args) => args.iter().enumerate().all(|(i, a)| {
            if safe.is_safe(*f, i + 1) {
                in_tn(a, sig, safe)
            } else {
                a.is_constructor_term(sig)
            }
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term is not in T_n")]
pub struct InterpretError;

/// The signature `F_n`: the original symbols plus a fresh defined symbol
/// `f_n` of arity `|nrm(f)|` for every defined `f`.
#[derive(Debug, Clone)]
pub struct PredicativeSignature {
    pub signature: Signature,
    image: Vec<Option<Symbol>>,
    safe: SafeMapping,
}

impl PredicativeSignature {
    pub fn new(sig: &Signature, safe: &SafeMapping) -> Self {
        let mut signature = sig.clone();
        let image = sig
            .symbols()
            .map(|f| {
                sig.is_defined(f).then(|| {
                    let name = format!("{}_n", sig.name(f));
                    let arity = safe.normal(sig, f).len();
                    signature.add_fresh(&name, arity, SymbolKind::Defined)
                })
            })
            .collect();
        PredicativeSignature {
            signature,
            image,
            safe: safe.clone(),
        }
    }

    /// `f_n` for a defined `f`.
    pub fn image(&self, f: Symbol) -> Option<Symbol> {
        self.image[f.index()]
    }

    /// Extends `prec` to `F_n`: `f_n` joins the class of `f`.
    pub fn extend_precedence(&self, prec: &Precedence) -> Precedence {
        let mut classes: Vec<(String, u64, Vec<Symbol>)> = (0..prec.class_count())
            .map(|c| (prec.class_name(c).to_string(), prec.class_rank(c), Vec::new()))
            .collect();
        for (i, img) in self.image.iter().enumerate() {
            let f = Symbol(i as u32);
            classes[prec.class_of(f)].2.push(f);
            if let Some(fn_) = img {
                classes[prec.class_of(f)].2.push(*fn_);
            }
        }
        Precedence::new(&self.signature, classes).expect("every symbol is classified")
    }

    /// The predicative interpretation `I(t)` over `F_n`.
    ///
    /// A constructor-rooted term with defined subterms has no symbol of its
    /// own in `F_n`; its image is the concatenation of its arguments' images.
    pub fn interpret(&self, t: &Term) -> Result<TermSequence, InterpretError> {
        let sig = &self.signature;
        if !in_tn(t, sig, &self.safe) {
            return Err(InterpretError);
        }
        let mut out = Vec::new();
        self.push_image(t, &mut out);
        Ok(TermSequence(out))
    }

    fn push_image(&self, t: &Term, out: &mut Vec<Term>) {
        if t.is_constructor_term(&self.signature) {
            return;
        }
        let Term::App(f, args) = t else { return };
        match self.image(*f) {
            Some(fn_) => {
                let normal = args
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !self.safe.is_safe(*f, i + 1))
                    .map(|(_, a)| a.clone())
                    .collect();
                out.push(Term::App(fn_, normal));
                for (i, a) in args.iter().enumerate() {
                    if self.safe.is_safe(*f, i + 1) {
                        self.push_image(a, out);
                    }
                }
            }
            None => {
                for a in args {
                    self.push_image(a, out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, term};

    fn fib_safe(sig: &Signature) -> SafeMapping {
        let mut safe = SafeMapping::defaults(sig);
        safe.set(sig.get("dfib").unwrap(), vec![2]);
        safe
    }

    #[test]
    fn tn_examples() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let safe = fib_safe(sig);
        assert!(in_tn(&term(sig, "fib(s(0))"), sig, &safe));
        assert!(in_tn(&term(sig, "dfib(s(0),dfib(0,0))"), sig, &safe));
        assert!(!in_tn(&term(sig, "dfib(dfib(0,0),0)"), sig, &safe));
        assert!(in_tn(&term(sig, "s(s(0))"), sig, &safe));
    }

    #[test]
    fn interpretation_examples() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let ps = PredicativeSignature::new(sig, &fib_safe(sig));
        let show = |t: &str| {
            ps.interpret(&term(sig, t))
                .unwrap()
                .display(&ps.signature)
                .to_string()
        };
        assert_eq!(show("s(s(0))"), "[]");
        assert_eq!(show("fib(s(0))"), "fib_n(s(0))");
        assert_eq!(show("dfib(s(0),dfib(0,0))"), "[dfib_n(s(0)) dfib_n(0)]");
        assert_eq!(show("s(dfib(0,0))"), "dfib_n(0)");
        assert_eq!(
            ps.interpret(&term(sig, "dfib(dfib(0,0),0)")),
            Err(InterpretError)
        );
        let fib_n = ps.image(sig.get("fib").unwrap()).unwrap();
        assert_eq!(ps.signature.arity(fib_n), 1);
        assert!(ps.signature.is_defined(fib_n));
    }

    #[test]
    fn extended_precedence() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let ps = PredicativeSignature::new(sig, &fib_safe(sig));
        let prec = Precedence::from_chain(sig, "fib > dfib > s = 0").unwrap();
        let ext = ps.extend_precedence(&prec);
        let fib_n = ps.image(sig.get("fib").unwrap()).unwrap();
        let dfib_n = ps.image(sig.get("dfib").unwrap()).unwrap();
        assert!(ext.gt(fib_n, dfib_n));
        assert!(ext.equiv(fib_n, sig.get("fib").unwrap()));
    }
}
