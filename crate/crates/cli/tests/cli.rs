use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use epostar::fixtures;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_epostar"));
    c.env_remove("EPOSTAR_SOLVER");
    c
}

fn sat_bin() -> &'static str {
    env!("CARGO_BIN_EXE_epostar-sat")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

const FIB_CERT: &str = "[classes]\nfib = \"a\"\ndfib = \"b\"\ns = \"c\"\n0 = \"c\"\n[ranks]\na = 2\nb = 1\nc = 0\n[safe]\ndfib = [2]\n";

#[test]
fn synth_and_check_close_the_loop() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in fixtures::ALL.iter().enumerate() {
        let trs = write(dir.path(), &format!("{i}.trs"), text);
        let cert = dir.path().join(format!("{i}.toml"));
        let o = run(&["synth", trs.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
        if *text == fixtures::ACK {
            assert_eq!(code(&o), 1);
            assert_eq!(stdout(&o).trim(), "incompatible");
            continue;
        }
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        let o = run(&["check", trs.to_str().unwrap(), "--cert", cert.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
}

#[test]
fn check_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let trs = write(dir.path(), "fib.trs", fixtures::FIB);
    let good = write(dir.path(), "good.toml", FIB_CERT);
    let o = run(&["check", trs.to_str().unwrap(), "--cert", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);

    let bad = write(dir.path(), "bad.toml", &FIB_CERT.replace("dfib = [2]", "dfib = [1, 2]"));
    let o = run(&["--format", "json", "check", trs.to_str().unwrap(), "--cert", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let lines = json_lines(&o);
    let failing: Vec<&Value> = lines.iter().filter(|v| v["oriented"] == false).collect();
    assert!(!failing.is_empty());
    assert!(failing[0]["trace"]["case"].is_u64());
    assert!(lines.iter().all(|v| v["format_version"] == 1 && v["command"] == "check"));
    assert_eq!(lines.last().unwrap()["status"], "incompatible");

    let unknown = write(dir.path(), "unknown.toml", &format!("{FIB_CERT}\n[mu]\nnope = [1]\n"));
    let o = run(&["check", trs.to_str().unwrap(), "--cert", unknown.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.trs", "(RULES f(x -> x)");
    for cmd in ["synth", "encode"] {
        let mut args = vec![cmd, broken.to_str().unwrap()];
        if cmd == "encode" {
            args.extend(["--out", "/dev/null"]);
        }
        assert_eq!(code(&run(&args)), 3);
    }
    assert_eq!(code(&run(&["measure", broken.to_str().unwrap(), "--max-size", "3"])), 3);
    assert_eq!(code(&run(&["synth", "/nonexistent/file.trs"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    let trs = write(dir.path(), "fib.trs", fixtures::FIB);
    assert_eq!(code(&run(&["measure", trs.to_str().unwrap(), "--max-size", "3", "--node-budget", "0"])), 3);
    assert_eq!(code(&run(&["synth", trs.to_str().unwrap(), "--solver", "/nonexistent/solver"])), 3);
    let nc = write(dir.path(), "nc.trs", "(VAR x)(RULES f(f(x)) -> x)");
    assert_eq!(code(&run(&["synth", nc.to_str().unwrap()])), 3);
}

#[test]
fn measure_tables() {
    let dir = tempfile::tempdir().unwrap();
    let trs = write(dir.path(), "fib.trs", fixtures::FIB);
    let o = run(&["--format", "json", "measure", trs.to_str().unwrap(), "--max-size", "8", "--derivation"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o);
    let heights: Vec<u64> = rows.iter().map(|r| r["height"].as_u64().unwrap()).collect();
    assert_eq!(heights, vec![0, 2, 2, 4, 6, 10, 16, 26]);
    let last = rows.last().unwrap();
    assert_eq!(last["witness"], "fib(s(s(s(s(s(s(0)))))))");
    assert_eq!(last["derivation"].as_array().unwrap().len(), 27);

    let again = run(&["--format", "json", "measure", trs.to_str().unwrap(), "--max-size", "8", "--derivation"]);
    assert_eq!(o.stdout, again.stdout);

    let empty = write(dir.path(), "empty.trs", "(VAR x)(RULES)");
    let o = run(&["--format", "json", "measure", empty.to_str().unwrap(), "--max-size", "4"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o);
    assert!(rows.iter().all(|r| r["height"] == 0));

    let partial = write(dir.path(), "partial.trs", fixtures::PARTIAL);
    let o = run(&["measure", partial.to_str().unwrap(), "--max-size", "4", "--bottom"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains('⊥') || stdout(&o).contains("g("));
}

#[test]
fn measure_full_rewriting_on_dup() {
    let dir = tempfile::tempdir().unwrap();
    let trs = write(dir.path(), "dup.trs", fixtures::DUP);
    let o = run(&[
        "--format", "json", "measure", trs.to_str().unwrap(), "--max-size", "4", "--strategy", "full",
        "--node-budget", "20000", "--size-budget", "100",
    ]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o);
    assert!(rows.last().unwrap()["height"].as_u64().unwrap() >= 5);
}

#[test]
fn encode_is_stable_and_agrees_with_synth() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, sat) in [
        ("fib", fixtures::FIB, true),
        ("proj", fixtures::PROJ, true),
        ("ack", fixtures::ACK, false),
    ] {
        let trs = write(dir.path(), &format!("{name}.trs"), text);
        let a = dir.path().join(format!("{name}-a.cnf"));
        let b = dir.path().join(format!("{name}-b.cnf"));
        assert_eq!(code(&run(&["encode", trs.to_str().unwrap(), "--out", a.to_str().unwrap()])), 0);
        assert_eq!(code(&run(&["encode", trs.to_str().unwrap(), "--out", b.to_str().unwrap()])), 0);
        let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ta, tb);
        assert!(String::from_utf8(ta).unwrap().lines().any(|l| l.starts_with("p cnf ")));
        let o = Command::new(sat_bin()).arg(&a).output().unwrap();
        assert_eq!(o.status.code().unwrap(), if sat { 10 } else { 20 }, "{name}");
    }
}

#[test]
fn external_backend_agrees_with_builtin() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in fixtures::ALL.iter().enumerate() {
        let trs = write(dir.path(), &format!("{i}.trs"), text);
        let builtin = run(&["synth", trs.to_str().unwrap()]);
        let external = run(&["synth", trs.to_str().unwrap(), "--solver", sat_bin()]);
        assert_eq!(code(&builtin), code(&external));
        let via_env = bin()
            .args(["synth", trs.to_str().unwrap()])
            .env("EPOSTAR_SOLVER", sat_bin())
            .output()
            .unwrap();
        assert_eq!(code(&builtin), code(&via_env));
    }
}

#[cfg(unix)]
fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    use std::os::unix::fs::PermissionsExt;
    let p = write(dir, name, &format!("#!/bin/sh\ncat > /dev/null\n{body}\n"));
    std::fs::set_permissions(&p, std::fs::Permissions::from_mode(0o755)).unwrap();
    p
}

#[cfg(unix)]
#[test]
fn misbehaving_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let trs = write(dir.path(), "fib.trs", fixtures::FIB);
    let slow = script(dir.path(), "slow.sh", "sleep 5");
    let o = run(&["--format", "json", "synth", trs.to_str().unwrap(), "--solver", slow.to_str().unwrap(), "--timeout", "0.3"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json_lines(&o)[0]["status"], "unknown");

    let garbage = script(dir.path(), "garbage.sh", "echo hello");
    let o = run(&["synth", trs.to_str().unwrap(), "--solver", garbage.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    // claims satisfiable with an all-false assignment, which violates the constraint
    let liar = script(dir.path(), "liar.sh", "echo 's SATISFIABLE'; echo 'v 0'");
    let o = run(&["synth", trs.to_str().unwrap(), "--solver", liar.to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let unsat = script(dir.path(), "unsat.sh", "echo 's UNSATISFIABLE'");
    let o = run(&["synth", trs.to_str().unwrap(), "--solver", unsat.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}
