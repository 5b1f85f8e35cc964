//! Running a SAT solver on a [`Cnf`]: either an external executable speaking
//! DIMACS over standard input and output, or the built-in CDCL solver.

mod cdcl;
mod external;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use external::parse_solver_output;

use crate::sat::Cnf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverResult {
    /// Values of variables `1..=num_vars`, at index `variable - 1`.
    Sat(Vec<bool>),
    Unsat,
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Builtin,
    External(PathBuf),
}

impl Backend {
    /// `builtin` selects the built-in solver; anything else is a path.
    pub fn parse(spec: &str) -> Backend {
        if spec == "builtin" {
            Backend::Builtin
        } else {
            Backend::External(PathBuf::from(spec))
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("cannot run solver `{path}`: {source}")]
    Launch {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("i/o error talking to the solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed solver output: {0}")]
    Malformed(String),
    #[error("solver returned an assignment that falsifies clause {clause}")]
    InvalidModel { clause: usize },
}

/// Solves `cnf` and re-checks any model against every clause.
pub fn solve(cnf: &Cnf, backend: &Backend, timeout: Option<Duration>) -> Result<SolverResult, SolverError> {
    let deadline = timeout.map(|t| Instant::now() + t);
    let result = match backend {
        Backend::Builtin => match cdcl::solve(cnf, deadline) {
            cdcl::Outcome::Sat(model) => SolverResult::Sat(model),
            cdcl::Outcome::Unsat => SolverResult::Unsat,
            cdcl::Outcome::Timeout => SolverResult::Unknown("timeout".into()),
        },
        Backend::External(path) => external::run(path, cnf, deadline)?,
    };
    if let SolverResult::Sat(model) = &result {
        verify(cnf, model)?;
    }
    Ok(result)
}

fn verify(cnf: &Cnf, model: &[bool]) -> Result<(), SolverError> {
    if model.len() != cnf.num_vars as usize {
        return Err(SolverError::Malformed(format!(
            "assignment covers {} of {} variables",
            model.len(),
            cnf.num_vars
        )));
    }
    match cnf
        .clauses
        .iter()
        .position(|c| !c.iter().any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)))
    {
        Some(clause) => Err(SolverError::InvalidModel { clause }),
        None => Ok(()),
    }
}
