//! Certificate synthesis: encode, solve, decode, and re-check.

use std::time::Duration;

use thiserror::Error;

use crate::epostar::{check_certificate, Certificate};
use crate::sat::{decode_model, to_cnf, Cnf, DecodeError, Encoder};
use crate::solver::{solve, Backend, SolverError, SolverResult};
use crate::term::Trs;

#[derive(Debug, Clone)]
pub enum SynthOutcome {
    Compatible(Certificate),
    Incompatible,
    Unknown(String),
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("not a constructor system")]
    NotConstructorSystem,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("decoded certificate fails the checker: {0}")]
    Rejected(String),
}

/// The clause set whose models are exactly the compatible certificates.
pub fn constraint_cnf(trs: &Trs) -> Cnf {
    let mut enc = Encoder::new(&trs.signature);
    let root = enc.encode_trs(trs);
    to_cnf(&enc.builder, root, &trs.signature)
}

pub fn synthesize(trs: &Trs, backend: &Backend, timeout: Option<Duration>) -> Result<SynthOutcome, SynthError> {
    if !trs.is_constructor_system() {
        return Err(SynthError::NotConstructorSystem);
    }
    let cnf = constraint_cnf(trs);
    match solve(&cnf, backend, timeout)? {
        SolverResult::Unsat => Ok(SynthOutcome::Incompatible),
        SolverResult::Unknown(reason) => Ok(SynthOutcome::Unknown(reason)),
        SolverResult::Sat(model) => {
            let cert = decode_model(&trs.signature, &cnf.atom_assignment(&model))?;
            let report = check_certificate(trs, &cert);
            if !report.compatible() {
                let msg = match report.certificate_errors.first() {
                    Some(e) => e.to_string(),
                    None => report
                        .rules
                        .iter()
                        .find(|r| !r.oriented)
                        .map(|r| format!("rule {} is not oriented", r.rule + 1))
                        .unwrap_or_default(),
                };
                return Err(SynthError::Rejected(msg));
            }
            Ok(SynthOutcome::Compatible(cert))
        }
    }
}
