//! Exponential path order (EPO*) for term rewrite systems.
//!
//! A constructor rewrite system whose rules are oriented by an instance of
//! EPO* has innermost runtime complexity bounded by `2^O(n^k)`. This crate
//! checks such orientations against a [`epostar::Certificate`], synthesizes
//! certificates through a propositional encoding and a SAT solver, and
//! provides an exhaustive rewriting engine to measure derivation heights.
//!
//! Module map:
//! - [`term`]: terms, signatures, rules, the rule-file parser, matching.
//! - [`rewrite`]: innermost and full rewriting, derivation heights, runtime
//!   complexity tables and bottom-completion.
//! - [`epo`]: the auxiliary order on term sequences and its descent measure.
//! - [`epostar`]: the order itself, certificates, `T_n` and the predicative
//!   interpretation.
//! - [`sat`]: formulas, the constraint encoding, Tseitin conversion, DIMACS.
//! - [`solver`]: the built-in CDCL solver and external solver processes.
//! - [`synth`]: the end-to-end synthesis loop.

pub mod epo;
pub mod epostar;
pub mod fixtures;
pub mod rewrite;
pub mod sat;
pub mod solver;
pub mod synth;
pub mod term;
