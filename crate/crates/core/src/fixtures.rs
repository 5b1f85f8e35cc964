//! Small rewrite systems used throughout the tests and the documentation.

use crate::term::{parse_term, parse_trs, Signature, Term, Trs};

/// Fibonacci numbers via an accumulator.
pub const FIB: &str = "(VAR x y)
(RULES
  fib(x) -> dfib(x,0)
  dfib(0,y) -> s(y)
  dfib(s(0),y) -> s(y)
  dfib(s(s(x)),y) -> dfib(s(x),dfib(x,y))
)
";

/// Innermost runtime is exponential, full rewriting is doubly exponential.
pub const DUP: &str = "(VAR x y)
(RULES
  d(x) -> c(x,x)
  f(0,y) -> y
  f(s(x),y) -> f(x,d(f(x,y)))
)
";

/// The Ackermann function; not compatible with the order.
pub const ACK: &str = "(VAR x y)
(RULES
  ack(0,y) -> s(y)
  ack(s(x),0) -> ack(x,s(0))
  ack(s(x),s(y)) -> ack(x,ack(s(x),y))
)
";

/// Addition and multiplication on unary numerals.
pub const ARITH: &str = "(VAR x y)
(RULES
  add(0,y) -> y
  add(s(x),y) -> s(add(x,y))
  mul(0,y) -> 0
  mul(s(x),y) -> add(y,mul(x,y))
)
";

/// A partially defined symbol.
pub const PARTIAL: &str = "(VAR x)
(RULES
  g(0) -> s(0)
)
";

/// A one-rule projection.
pub const PROJ: &str = "(VAR x)
(RULES
  f(x) -> x
)
";

pub const ALL: [&str; 6] = [FIB, DUP, ACK, ARITH, PARTIAL, PROJ];

pub fn fib() -> Trs {
    parse_trs(FIB).expect("fixture parses")
}

pub fn dup() -> Trs {
    parse_trs(DUP).expect("fixture parses")
}

pub fn ack() -> Trs {
    parse_trs(ACK).expect("fixture parses")
}

pub fn arith() -> Trs {
    parse_trs(ARITH).expect("fixture parses")
}

pub fn partial() -> Trs {
    parse_trs(PARTIAL).expect("fixture parses")
}

/// Parses a term over `sig`; unknown identifiers become variables.
/// Panics on malformed input, so only use it with literals.
pub fn term(sig: &Signature, text: &str) -> Term {
    parse_term(sig, text).unwrap_or_else(|e| panic!("bad term `{text}`: {e}"))
}

/// `s^n(0)` over a signature containing `s` and `0`.
pub fn numeral(sig: &Signature, n: usize) -> Term {
    let s = sig.get("s").expect("signature has s");
    let zero = sig.get("0").expect("signature has 0");
    (0..n).fold(Term::constant(zero), |t, _| Term::app(s, vec![t]))
}
