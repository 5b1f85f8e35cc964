//! Propositional encoding of the search for a compatible certificate.
//!
//! [`Formula`] is a hash-consed DAG with constant folding; [`Encoder`] builds
//! the constraints for a rewrite system over a fixed [`Atom`] space; [`Cnf`]
//! holds the Tseitin clauses together with the atom table used to decode a
//! model back into a [`crate::epostar::Certificate`].

mod cnf;
mod encode;
mod formula;

pub use cnf::{cnf_over, parse_dimacs, to_cnf, Cnf, DimacsError};
pub use encode::{certificate_assignment, decode_model, DecodeError, Encoder};
pub use formula::{Formula, FormulaBuilder, Node};

use crate::term::{Signature, Symbol};

/// A named propositional variable of the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `f ≻ g` for distinct defined symbols.
    Gt(Symbol, Symbol),
    /// `f ≈ g` for distinct defined symbols of equal arity; stored with the
    /// smaller symbol first.
    Eq(Symbol, Symbol),
    /// Position `i` (1-based) of a defined symbol is safe.
    Safe(Symbol, usize),
    /// Original position `i` moves to position `k` (both 1-based).
    Mu(Symbol, usize, usize),
    /// Bit `b` (0 = least significant) of a defined symbol's level.
    Level(Symbol, usize),
}

impl Atom {
    pub fn name(&self, sig: &Signature) -> String {
        match *self {
            Atom::Gt(f, g) => format!("gt({},{})", sig.name(f), sig.name(g)),
            Atom::Eq(f, g) => format!("eq({},{})", sig.name(f), sig.name(g)),
            Atom::Safe(f, i) => format!("safe({},{})", sig.name(f), i),
            Atom::Mu(f, i, k) => format!("mu({},{},{})", sig.name(f), i, k),
            Atom::Level(f, b) => format!("level({},{})", sig.name(f), b),
        }
    }
}

/// Number of level bits for `defined` symbols: `⌈log2(defined + 1)⌉`.
pub fn level_width(defined: usize) -> usize {
    let mut w = 0;
    while (1usize << w) < defined + 1 {
        w += 1;
    }
    w
}

/// Every atom of the encoding for `sig`, in the fixed order used for
/// variable numbering: all `Gt`, then `Eq`, `Safe`, `Mu` and `Level`, with
/// symbols sorted by name and positions ascending.
pub fn atom_space(sig: &Signature) -> Vec<Atom> {
    let sorted = sig.sorted_by_name();
    let defined: Vec<Symbol> = sorted.iter().copied().filter(|&f| sig.is_defined(f)).collect();
    let mut atoms = Vec::new();
    for &f in &defined {
        for &g in &defined {
            if f != g {
                atoms.push(Atom::Gt(f, g));
            }
        }
    }
    for (i, &f) in defined.iter().enumerate() {
        for &g in &defined[i + 1..] {
            if sig.arity(f) == sig.arity(g) {
                atoms.push(eq_atom(f, g));
            }
        }
    }
    for &f in &defined {
        for i in 1..=sig.arity(f) {
            atoms.push(Atom::Safe(f, i));
        }
    }
    for &f in &sorted {
        let n = sig.arity(f);
        for i in 1..=n {
            for k in 1..=n {
                atoms.push(Atom::Mu(f, i, k));
            }
        }
    }
    let w = level_width(defined.len());
    for &f in &defined {
        for b in 0..w {
            atoms.push(Atom::Level(f, b));
        }
    }
    atoms
}

pub(crate) fn eq_atom(f: Symbol, g: Symbol) -> Atom {
    if f <= g {
        Atom::Eq(f, g)
    } else {
        Atom::Eq(g, f)
    }
}
