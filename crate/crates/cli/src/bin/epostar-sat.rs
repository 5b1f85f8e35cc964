//! Standalone front end to the built-in solver. Reads DIMACS from a file or
//! standard input and answers in the usual `s`/`v` format, exiting with 10
//! (satisfiable), 20 (unsatisfiable) or 0 (unknown).

use std::io::Read;
use std::process::ExitCode;

use anyhow::Context;
use epostar::sat::parse_dimacs;
use epostar::solver::{solve, Backend, SolverResult};

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run() -> anyhow::Result<u8> {
    let mut text = String::new();
    match std::env::args().nth(1) {
        Some(path) => text = std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?,
        None => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    let cnf = parse_dimacs(&text)?;
    Ok(match solve(&cnf, &Backend::Builtin, None)? {
        SolverResult::Sat(model) => {
            println!("s SATISFIABLE");
            let lits: Vec<String> = model
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                .collect();
            for chunk in lits.chunks(20) {
                println!("v {}", chunk.join(" "));
            }
            println!("v 0");
            10
        }
        SolverResult::Unsat => {
            println!("s UNSATISFIABLE");
            20
        }
        SolverResult::Unknown(_) => {
            println!("s UNKNOWN");
            0
        }
    })
}
