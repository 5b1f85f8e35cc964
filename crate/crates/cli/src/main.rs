//! Command-line front end: `synth`, `check`, `measure` and `encode`.
//!
//! Exit status: 0 compatible or success, 1 incompatible, 2 unknown,
//! 3 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use epostar::epostar::{check_certificate, Certificate};
use epostar::rewrite::{bottom_complete, empirical_rc, Budget, Rewriter, Strategy};
use epostar::solver::{Backend, SolverError};
use epostar::synth::{constraint_cnf, synthesize, SynthError, SynthOutcome};
use epostar::term::{parse_trs, Trs};
use serde_json::{json, Value};

const FORMAT_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "epostar", version, about = "Exponential path order for rewrite systems")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Innermost,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a certificate with a SAT solver.
    Synth {
        file: PathBuf,
        /// Solver executable, or `builtin`.
        #[arg(long, env = "EPOSTAR_SOLVER", default_value = "builtin")]
        solver: String,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against a rewrite system.
    Check {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Tabulate maximal derivation heights of basic terms by size.
    Measure {
        file: PathBuf,
        #[arg(long)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Innermost)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = Budget::default().node_budget, value_parser = positive)]
        node_budget: usize,
        #[arg(long, default_value_t = Budget::default().size_budget, value_parser = positive)]
        size_budget: usize,
        /// Rewrite defined-rooted normal forms to a fresh bottom constant.
        #[arg(long)]
        bottom: bool,
        /// Include the witness derivation of every row.
        #[arg(long)]
        derivation: bool,
    },
    /// Write the constraint as DIMACS CNF.
    Encode {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure that maps to an exit status.
struct Exit {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Exit {
    fn from(e: E) -> Self {
        Exit { code: 3, error: e.into() }
    }
}

struct Output {
    format: Format,
    command: &'static str,
}

impl Output {
    fn emit(&self, mut record: Value, human: impl FnOnce() -> String) {
        match self.format {
            Format::Json => {
                let obj = record.as_object_mut().expect("records are objects");
                obj.insert("format_version".into(), json!(FORMAT_VERSION));
                obj.insert("command".into(), json!(self.command));
                println!("{record}");
            }
            Format::Human => println!("{}", human()),
        }
    }
}

fn read_trs(path: &Path) -> Result<Trs, Exit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let trs = parse_trs(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(trs)
}

fn synth(out: &Output, file: &Path, solver: &str, timeout: Option<f64>, cert_out: Option<&Path>) -> Result<u8, Exit> {
    let trs = read_trs(file)?;
    let timeout = match timeout {
        Some(t) if !(t > 0.0 && t.is_finite()) => return Err(anyhow::anyhow!("timeout must be positive").into()),
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    let backend = Backend::parse(solver);
    let outcome = match synthesize(&trs, &backend, timeout) {
        Ok(o) => o,
        Err(SynthError::NotConstructorSystem) => {
            return Err(anyhow::anyhow!("{}: not a constructor system", file.display()).into())
        }
        Err(e @ SynthError::Solver(SolverError::Launch { .. })) => return Err(e.into()),
        Err(e) => return Err(Exit { code: 2, error: e.into() }),
    };
    match outcome {
        SynthOutcome::Compatible(cert) => {
            let text = cert.to_toml(&trs.signature);
            if let Some(path) = cert_out {
                fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            out.emit(json!({"status": "compatible", "certificate": text}), || {
                format!("compatible\n{}", text.trim_end())
            });
            Ok(0)
        }
        SynthOutcome::Incompatible => {
            out.emit(json!({"status": "incompatible"}), || "incompatible".into());
            Ok(1)
        }
        SynthOutcome::Unknown(reason) => {
            out.emit(json!({"status": "unknown", "reason": reason}), || format!("unknown: {reason}"));
            Ok(2)
        }
    }
}

fn check(out: &Output, file: &Path, cert_path: &Path) -> Result<u8, Exit> {
    let trs = read_trs(file)?;
    let sig = &trs.signature;
    let text = fs::read_to_string(cert_path).with_context(|| format!("reading {}", cert_path.display()))?;
    let cert = Certificate::from_toml(sig, &text).with_context(|| format!("parsing {}", cert_path.display()))?;
    let report = check_certificate(&trs, &cert);
    if !report.constructor_system {
        return Err(anyhow::anyhow!("{}: not a constructor system", file.display()).into());
    }
    if !report.certificate_errors.is_empty() {
        let msgs: Vec<String> = report.certificate_errors.iter().map(|e| e.to_string()).collect();
        return Err(anyhow::anyhow!("invalid certificate: {}", msgs.join("; ")).into());
    }
    for verdict in &report.rules {
        let rule = &trs.rules[verdict.rule];
        let shown = format!("{} -> {}", rule.lhs.display(sig), rule.rhs.display(sig));
        let trace = verdict.trace.map(|t| json!({"case": t.case, "position": t.position}));
        out.emit(
            json!({"rule": verdict.rule + 1, "text": shown, "oriented": verdict.oriented, "trace": trace}),
            || match verdict.trace {
                None => format!("rule {}: {shown}: oriented", verdict.rule + 1),
                Some(t) => format!("rule {}: {shown}: not oriented ({t})", verdict.rule + 1),
            },
        );
    }
    let ok = report.compatible();
    let status = if ok { "compatible" } else { "incompatible" };
    out.emit(json!({"status": status}), || status.into());
    Ok(if ok { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn measure(
    out: &Output,
    file: &Path,
    max_size: usize,
    strategy: StrategyArg,
    node_budget: usize,
    size_budget: usize,
    bottom: bool,
    derivation: bool,
) -> Result<u8, Exit> {
    let trs = read_trs(file)?;
    let strategy = match strategy {
        StrategyArg::Innermost => Strategy::Innermost,
        StrategyArg::Full => Strategy::Full,
    };
    let budget = Budget {
        node_budget,
        size_budget,
        memoize: true,
    };
    let (trs, bottom_sym) = if bottom {
        // the rewriter adds the completion rules on the fly; only the
        // bottom constant is needed in the signature
        let (completed, b) = bottom_complete(&trs, 0);
        (Trs::new(completed.signature, trs.rules)?, Some(b))
    } else {
        (trs, None)
    };
    let mut rewriter = Rewriter::new(&trs, strategy);
    if let Some(b) = bottom_sym {
        rewriter = rewriter.with_bottom(b);
    }
    let sig = &trs.signature;
    for row in empirical_rc(rewriter, max_size, budget) {
        let witness = row.witness.as_ref().map(|w| w.start.display(sig).to_string());
        let mut record = json!({
            "size": row.size,
            "height": row.height,
            "witness": witness,
            "truncated": row.truncated,
        });
        if derivation {
            let steps: Vec<String> = row
                .witness
                .iter()
                .flat_map(|w| w.witness.iter().map(|t| t.display(sig).to_string()))
                .collect();
            record["derivation"] = json!(steps);
        }
        out.emit(record, || {
            let mut line = format!(
                "{:>4} {:>8} {}{}",
                row.size,
                row.height,
                witness.clone().unwrap_or_else(|| "-".into()),
                if row.truncated { " (truncated)" } else { "" }
            );
            if derivation {
                if let Some(w) = &row.witness {
                    for (i, t) in w.witness.iter().enumerate() {
                        let arrow = if i == 0 { "  " } else { "->" };
                        line.push_str(&format!("\n       {arrow} {}", t.display(sig)));
                    }
                }
            }
            line
        });
    }
    Ok(0)
}

fn encode(out: &Output, file: &Path, cnf_out: &Path) -> Result<u8, Exit> {
    let trs = read_trs(file)?;
    let cnf = constraint_cnf(&trs);
    fs::write(cnf_out, cnf.to_dimacs()).with_context(|| format!("writing {}", cnf_out.display()))?;
    out.emit(
        json!({"status": "written", "path": cnf_out.display().to_string(), "variables": cnf.num_vars, "clauses": cnf.clauses.len()}),
        || format!("{} variables, {} clauses written to {}", cnf.num_vars, cnf.clauses.len(), cnf_out.display()),
    );
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Exit> {
    let name = match &cli.command {
        Command::Synth { .. } => "synth",
        Command::Check { .. } => "check",
        Command::Measure { .. } => "measure",
        Command::Encode { .. } => "encode",
    };
    let out = Output { format: cli.format, command: name };
    match cli.command {
        Command::Synth { file, solver, timeout, out: cert_out } => {
            synth(&out, &file, &solver, timeout, cert_out.as_deref())
        }
        Command::Check { file, cert } => check(&out, &file, &cert),
        Command::Measure { file, max_size, strategy, node_budget, size_budget, bottom, derivation } => {
            measure(&out, &file, max_size, strategy, node_budget, size_budget, bottom, derivation)
        }
        Command::Encode { file, out: cnf_out } => encode(&out, &file, &cnf_out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit { code, error }) => {
            if format == Format::Json {
                println!(
                    "{}",
                    json!({"format_version": FORMAT_VERSION, "status": "error", "message": format!("{error:#}")})
                );
            }
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
