use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{SolverError, SolverResult};
use crate::sat::Cnf;

/// Reads the standard competition output format. Variables missing from the
/// `v` lines are false.
pub fn parse_solver_output(text: &str, num_vars: u32) -> Result<SolverResult, SolverError> {
    let mut status: Option<&str> = None;
    let mut model = vec![false; num_vars as usize];
    let mut terminated = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("s ") {
            if status.is_some() {
                return Err(SolverError::Malformed("more than one status line".into()));
            }
            status = Some(rest.trim());
        } else if let Some(rest) = line.strip_prefix('v') {
            if terminated {
                return Err(SolverError::Malformed("value line after terminating 0".into()));
            }
            for tok in rest.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| SolverError::Malformed(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    terminated = true;
                    continue;
                }
                if terminated {
                    return Err(SolverError::Malformed("literal after terminating 0".into()));
                }
                let v = lit.unsigned_abs();
                if v > num_vars as u64 {
                    return Err(SolverError::Malformed(format!("variable {v} out of range")));
                }
                model[v as usize - 1] = lit > 0;
            }
        } else {
            return Err(SolverError::Malformed(format!("unexpected line `{line}`")));
        }
    }
    match status {
        Some("SATISFIABLE") => Ok(SolverResult::Sat(model)),
        Some("UNSATISFIABLE") => Ok(SolverResult::Unsat),
        Some("UNKNOWN") => Ok(SolverResult::Unknown("solver reported UNKNOWN".into())),
        Some(other) => Err(SolverError::Malformed(format!("unknown status `{other}`"))),
        None => Err(SolverError::Malformed("no status line".into())),
    }
}

pub(super) fn run(path: &Path, cnf: &Cnf, deadline: Option<Instant>) -> Result<SolverResult, SolverError> {
    let mut child = Command::new(path)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SolverError::Launch {
            path: path.to_path_buf(),
            source,
        })?;
    let input = cnf.to_dimacs();
    let mut stdin = child.stdin.take().expect("piped stdin");
    let writer = thread::spawn(move || {
        // a solver may exit before reading everything
        let _ = stdin.write_all(input.as_bytes());
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut out = String::new();
        stdout.read_to_string(&mut out).map(|_| out)
    });
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            let _ = child.kill();
            let _ = child.wait();
            let _ = writer.join();
            let _ = reader.join();
            return Ok(SolverResult::Unknown("timeout".into()));
        }
        thread::sleep(Duration::from_millis(5));
    }
    let _ = writer.join();
    let out = reader
        .join()
        .map_err(|_| SolverError::Malformed("reader thread panicked".into()))??;
    parse_solver_output(&out, cnf.num_vars)
}
