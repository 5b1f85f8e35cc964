use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epo::{Precedence, PrecedenceError};
use crate::term::{Signature, Symbol, Term};

/// Safe argument positions per symbol, 1-based and ascending, in the
/// symbol's original argument order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeMapping {
    positions: Vec<Vec<usize>>,
}

impl SafeMapping {
    /// Constructors all-safe, defined symbols all-normal.
    pub fn defaults(sig: &Signature) -> Self {
        let positions = sig
            .symbols()
            .map(|f| {
                if sig.is_defined(f) {
                    Vec::new()
                } else {
                    (1..=sig.arity(f)).collect()
                }
            })
            .collect();
        SafeMapping { positions }
    }

    pub fn get(&self, f: Symbol) -> &[usize] {
        &self.positions[f.index()]
    }

    /// Replaces the safe positions of `f`; the list is sorted and deduplicated.
    pub fn set(&mut self, f: Symbol, mut positions: Vec<usize>) {
        positions.sort_unstable();
        positions.dedup();
        self.positions[f.index()] = positions;
    }

    pub fn is_safe(&self, f: Symbol, position: usize) -> bool {
        self.positions[f.index()].contains(&position)
    }

    pub fn normal(&self, sig: &Signature, f: Symbol) -> Vec<usize> {
        (1..=sig.arity(f)).filter(|&i| !self.is_safe(f, i)).collect()
    }
}

/// Argument permutation per symbol. Entry `i − 1` of a symbol's list is the
/// new position of its original argument `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgPermutation {
    images: Vec<Vec<usize>>,
}

impl ArgPermutation {
    pub fn identity(sig: &Signature) -> Self {
        ArgPermutation {
            images: sig.symbols().map(|f| (1..=sig.arity(f)).collect()).collect(),
        }
    }

    pub fn get(&self, f: Symbol) -> &[usize] {
        &self.images[f.index()]
    }

    pub fn set(&mut self, f: Symbol, images: Vec<usize>) {
        self.images[f.index()] = images;
    }

    pub fn is_identity(&self, f: Symbol) -> bool {
        self.images[f.index()].iter().enumerate().all(|(i, &p)| p == i + 1)
    }

    pub fn is_bijection(&self, sig: &Signature, f: Symbol) -> bool {
        let img = &self.images[f.index()];
        let n = sig.arity(f);
        if img.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &p in img {
            if p == 0 || p > n || seen[p - 1] {
                return false;
            }
            seen[p - 1] = true;
        }
        true
    }

    fn valid(&self, f: Symbol, arity: usize) -> bool {
        let img = &self.images[f.index()];
        img.len() == arity && {
            let mut seen = vec![false; arity];
            img.iter().all(|&p| {
                p >= 1 && p <= arity && !std::mem::replace(&mut seen[p - 1], true)
            })
        }
    }

    /// The permuted term. Symbols whose entry is not a bijection keep their
    /// argument order.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => {
                let args: Vec<Term> = args.iter().map(|a| self.apply(a)).collect();
                if !self.valid(*f, args.len()) {
                    return Term::App(*f, args);
                }
                let mut out = args.clone();
                for (i, a) in args.into_iter().enumerate() {
                    out[self.images[f.index()][i] - 1] = a;
                }
                Term::App(*f, out)
            }
        }
    }

    /// The original position that lands at `new_position` (both 1-based).
    pub fn original_position(&self, f: Symbol, new_position: usize) -> usize {
        self.images[f.index()]
            .iter()
            .position(|&p| p == new_position)
            .map_or(new_position, |i| i + 1)
    }
}

/// A proposed witness of compatibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub precedence: Precedence,
    pub safe: SafeMapping,
    pub mu: ArgPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("precedence is not admissible: defined `{defined}` is not above constructor `{constructor}`")]
    NotAdmissible { defined: String, constructor: String },
    #[error("argument permutation of `{0}` is not a bijection")]
    NotPermutation(String),
    #[error("constructor `{0}` must have all argument positions safe")]
    ConstructorNotSafe(String),
    #[error("safe position {position} out of range for `{symbol}`")]
    SafeOutOfRange { symbol: String, position: usize },
    #[error("`{0}` and `{1}` are equivalent with equal arity but different safe positions")]
    SafeMismatch(String, String),
    #[error("`{0}` and `{1}` are equivalent but have different numbers of normal arguments")]
    NormalCountMismatch(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateFileError {
    #[error("malformed certificate: {0}")]
    Format(String),
    #[error("unknown symbol `{0}` in certificate")]
    UnknownSymbol(String),
    #[error("symbol `{0}` has no class")]
    MissingClass(String),
    #[error("class `{0}` has no rank")]
    MissingRank(String),
    #[error("rank given for unused class `{0}`")]
    UnusedClass(String),
    #[error("safe positions of `{0}` must be ascending and within the arity")]
    BadSafe(String),
    #[error(transparent)]
    Precedence(#[from] PrecedenceError),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    classes: BTreeMap<String, String>,
    ranks: BTreeMap<String, u64>,
    #[serde(default)]
    safe: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    mu: BTreeMap<String, Vec<usize>>,
}

impl Certificate {
    /// Default safe mapping and identity permutation.
    pub fn with_defaults(sig: &Signature, precedence: Precedence) -> Self {
        Certificate {
            precedence,
            safe: SafeMapping::defaults(sig),
            mu: ArgPermutation::identity(sig),
        }
    }

    /// Safe flags of `f` indexed by 0-based position after permutation.
    pub fn permuted_safe_flags(&self, sig: &Signature, f: Symbol) -> Vec<bool> {
        let n = sig.arity(f);
        let mut flags = vec![false; n];
        let bijective = self.mu.is_bijection(sig, f);
        for &p in self.safe.get(f) {
            if p == 0 || p > n {
                continue;
            }
            let q = if bijective { self.mu.get(f)[p - 1] } else { p };
            flags[q - 1] = true;
        }
        flags
    }

    /// All violations of the certificate invariants.
    pub fn validate(&self, sig: &Signature) -> Vec<CertificateError> {
        let mut errors = Vec::new();
        let name = |f: Symbol| sig.name(f).to_string();
        'outer: for f in sig.defined() {
            for c in sig.constructors() {
                if !self.precedence.gt(f, c) {
                    errors.push(CertificateError::NotAdmissible {
                        defined: name(f),
                        constructor: name(c),
                    });
                    break 'outer;
                }
            }
        }
        for f in sig.symbols() {
            if !self.mu.is_bijection(sig, f) {
                errors.push(CertificateError::NotPermutation(name(f)));
            }
            if let Some(&p) = self.safe.get(f).iter().find(|&&p| p == 0 || p > sig.arity(f)) {
                errors.push(CertificateError::SafeOutOfRange {
                    symbol: name(f),
                    position: p,
                });
            }
            if !sig.is_defined(f) && self.safe.get(f).len() != sig.arity(f) {
                errors.push(CertificateError::ConstructorNotSafe(name(f)));
            }
        }
        let defined: Vec<Symbol> = sig.defined().collect();
        for (i, &f) in defined.iter().enumerate() {
            for &g in &defined[i + 1..] {
                if !self.precedence.equiv(f, g) {
                    continue;
                }
                let same_arity = sig.arity(f) == sig.arity(g);
                if same_arity
                    && self.permuted_safe_flags(sig, f) != self.permuted_safe_flags(sig, g)
                {
                    errors.push(CertificateError::SafeMismatch(name(f), name(g)));
                } else if self.safe.normal(sig, f).len() != self.safe.normal(sig, g).len() {
                    errors.push(CertificateError::NormalCountMismatch(name(f), name(g)));
                }
            }
        }
        errors
    }

    /// Reads the TOML certificate format.
    pub fn from_toml(sig: &Signature, text: &str) -> Result<Self, CertificateFileError> {
        let file: CertificateFile =
            toml::from_str(text).map_err(|e| CertificateFileError::Format(e.to_string()))?;
        let lookup = |name: &str| {
            sig.lookup(name)
                .ok_or_else(|| CertificateFileError::UnknownSymbol(name.to_string()))
        };
        for name in file.classes.keys().chain(file.safe.keys()).chain(file.mu.keys()) {
            lookup(name)?;
        }
        let mut class_index: HashMap<&str, usize> = HashMap::new();
        let mut classes: Vec<(String, u64, Vec<Symbol>)> = Vec::new();
        for f in sig.symbols() {
            let class = file
                .classes
                .get(sig.name(f))
                .ok_or_else(|| CertificateFileError::MissingClass(sig.name(f).to_string()))?;
            let idx = match class_index.get(class.as_str()) {
                Some(&i) => i,
                None => {
                    let rank = *file
                        .ranks
                        .get(class)
                        .ok_or_else(|| CertificateFileError::MissingRank(class.clone()))?;
                    classes.push((class.clone(), rank, Vec::new()));
                    class_index.insert(class, classes.len() - 1);
                    classes.len() - 1
                }
            };
            classes[idx].2.push(f);
        }
        if let Some(unused) = file.ranks.keys().find(|c| !class_index.contains_key(c.as_str())) {
            return Err(CertificateFileError::UnusedClass(unused.clone()));
        }
        let precedence = Precedence::new(sig, classes)?;
        let mut cert = Certificate::with_defaults(sig, precedence);
        for (name, positions) in &file.safe {
            let f = lookup(name)?;
            let ascending = positions.windows(2).all(|w| w[0] < w[1]);
            if !ascending || positions.iter().any(|&p| p == 0 || p > sig.arity(f)) {
                return Err(CertificateFileError::BadSafe(name.clone()));
            }
            cert.safe.set(f, positions.clone());
        }
        for (name, images) in &file.mu {
            cert.mu.set(lookup(name)?, images.clone());
        }
        Ok(cert)
    }

    /// Writes the TOML certificate format. Identity permutations are omitted.
    pub fn to_toml(&self, sig: &Signature) -> String {
        let mut file = CertificateFile::default();
        for f in sig.symbols() {
            let class = self.precedence.class_of(f);
            let cname = self.precedence.class_name(class).to_string();
            file.ranks.insert(cname.clone(), self.precedence.class_rank(class));
            file.classes.insert(sig.name(f).to_string(), cname);
            file.safe.insert(sig.name(f).to_string(), self.safe.get(f).to_vec());
            if !self.mu.is_identity(f) {
                file.mu.insert(sig.name(f).to_string(), self.mu.get(f).to_vec());
            }
        }
        toml::to_string(&file).expect("certificate serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const FIB_CERT: &str = r#"
[classes]
fib = "fib"
dfib = "dfib"
s = "num"
0 = "num"

[ranks]
fib = 2
dfib = 1
num = 0

[safe]
dfib = [2]
"#;

    #[test]
    fn reads_and_writes() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let cert = Certificate::from_toml(sig, FIB_CERT).unwrap();
        assert!(cert.validate(sig).is_empty());
        let dfib = sig.get("dfib").unwrap();
        assert_eq!(cert.safe.get(dfib), &[2]);
        assert!(cert.safe.is_safe(sig.get("s").unwrap(), 1));
        assert!(cert.precedence.equiv(sig.get("s").unwrap(), sig.get("0").unwrap()));
        let again = Certificate::from_toml(sig, &cert.to_toml(sig)).unwrap();
        assert_eq!(again, cert);
    }

    #[test]
    fn file_errors() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let err = |text: &str| Certificate::from_toml(sig, text).unwrap_err();
        assert!(matches!(
            err(&FIB_CERT.replace("fib = \"fib\"", "fib = \"fib\"\nfoo = \"fib\"")),
            CertificateFileError::UnknownSymbol(_)
        ));
        assert!(matches!(
            err(&FIB_CERT.replace("fib = \"fib\"\n", "")),
            CertificateFileError::MissingClass(_)
        ));
        assert!(matches!(
            err(&FIB_CERT.replace("num = 0", "")),
            CertificateFileError::MissingRank(_)
        ));
        assert!(matches!(
            err(&FIB_CERT.replace("dfib = [2]", "dfib = [2, 1]")),
            CertificateFileError::BadSafe(_)
        ));
        assert!(matches!(
            err(&FIB_CERT.replace("dfib = [2]", "dfib = [3]")),
            CertificateFileError::BadSafe(_)
        ));
        assert!(matches!(err("classes = 3"), CertificateFileError::Format(_)));
        assert!(matches!(
            err(&format!("{FIB_CERT}\n[extra]\n")),
            CertificateFileError::Format(_)
        ));
    }

    #[test]
    fn validation_errors() {
        let trs = fixtures::fib();
        let sig = &trs.signature;
        let mut cert = Certificate::from_toml(sig, FIB_CERT).unwrap();
        cert.mu.set(sig.get("dfib").unwrap(), vec![1, 1]);
        cert.safe.set(sig.get("s").unwrap(), vec![]);
        let errors = cert.validate(sig);
        assert!(errors.contains(&CertificateError::NotPermutation("dfib".into())));
        assert!(errors.contains(&CertificateError::ConstructorNotSafe("s".into())));

        let text = FIB_CERT
            .replace("fib = \"fib\"", "fib = \"dfib\"")
            .replace("fib = 2\n", "")
            .replace("dfib = [2]", "dfib = []");
        let cert = Certificate::from_toml(sig, &text).unwrap();
        assert_eq!(
            cert.validate(sig),
            vec![CertificateError::NormalCountMismatch("fib".into(), "dfib".into())]
        );
    }

    #[test]
    fn compat_uses_permuted_positions() {
        let trs = crate::term::parse_trs("(VAR x y)(RULES f(x,y) -> g(y,x) g(x,y) -> 0)").unwrap();
        let sig = &trs.signature;
        let (f, g) = (sig.get("f").unwrap(), sig.get("g").unwrap());
        let prec = Precedence::from_chain(sig, "f = g > 0").unwrap();
        let mut cert = Certificate::with_defaults(sig, prec);
        cert.safe.set(f, vec![1]);
        cert.safe.set(g, vec![2]);
        assert_eq!(
            cert.validate(sig),
            vec![CertificateError::SafeMismatch("f".into(), "g".into())]
        );
        cert.mu.set(f, vec![2, 1]);
        assert!(cert.validate(sig).is_empty());
        let t = crate::fixtures::term(sig, "f(x,0)");
        assert_eq!(cert.mu.apply(&t), crate::fixtures::term(sig, "f(0,x)"));
        assert_eq!(cert.mu.original_position(f, 2), 1);
    }
}
