mod common;

use std::os::unix::fs::PermissionsExt;
use std::path::Path;

use common::{delphi, stub, write};

const PRIME76: &str = r#"(set-logic ALL)
(declare-oracle-fun isPrime (Int) Bool "./isprime")
(declare-fun f1 () Int)
(declare-fun f2 () Int)
(declare-fun f3 () Int)
(assert (= (* f1 f2 f3) 76))
(assert (and (isPrime f1) (isPrime f2) (isPrime f3)))
(check-sat)
"#;

const PBE_SUCC: &str = r#"(set-logic LIA)
(synth-fun f ((x Int)) Int ((S Int)) ((S Int (x 1 (+ S S)))))
(declare-var x Int)
(declare-oracle-fun ok (Int Int) Bool "./member")
(oracle-constraint "./eval" ((q Int)) ((z Int)) (= (f q) z))
(constraint (=> (and (<= (- 4) x) (<= x 4)) (ok x (f x))))
(check-synth)
"#;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = delphi(args);
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run_file(path: &Path, extra: &[&str]) -> Run {
    let mut args: Vec<&str> = extra.to_vec();
    args.push(path.to_str().unwrap());
    run(&args)
}

fn executable(dir: &Path, name: &str, body: &str) {
    let path = write(dir, name, &format!("#!/bin/sh\n{body}\n"));
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
}

fn first_line(r: &Run) -> &str {
    r.stdout.lines().next().unwrap_or("")
}

fn successor_oracles(dir: &Path) {
    let reference = write(dir, "succ.ref", "(define-fun ref ((x Int)) Int (+ x 1))\n");
    stub(dir, "member", "member", &[&reference]);
    stub(dir, "eval", "eval", &[&reference]);
}

#[test]
fn sat_prints_the_model() {
    let dir = tempfile::tempdir().unwrap();
    stub(dir.path(), "isprime", "isprime", &[]);
    let r = run_file(&write(dir.path(), "p.smt2", PRIME76), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(first_line(&r), "sat");
    let defs = common::definitions(&r.stdout);
    let names: Vec<&str> = defs.iter().map(|d| d.name.as_str()).collect();
    assert_eq!(names, ["f1", "f2", "f3"]);
    let mut values: Vec<i64> = defs.iter().map(|d| common::int_of(d.body.as_value().unwrap())).collect();
    values.sort();
    assert_eq!(values, [2, 2, 19]);
}

#[test]
fn unsat_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    stub(dir.path(), "isprime", "isprime", &[]);
    let text = "(set-logic ALL)\n(declare-oracle-fun isPrime (Int) Bool \"./isprime\")\n(declare-fun p () Int)\n\
                (assert (and (<= 90 p) (<= p 96) (isPrime p)))\n(check-sat)\n";
    let r = run_file(&write(dir.path(), "p.smt2", text), &[]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "unsat\n"));
}

#[test]
fn synthesis_prints_the_definition() {
    let dir = tempfile::tempdir().unwrap();
    successor_oracles(dir.path());
    let r = run_file(&write(dir.path(), "pbe_succ.sy", PBE_SUCC), &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "(define-fun f ((x Int)) Int (+ x 1))\n");
}

#[test]
fn unrealizable_synthesis_reports_no_solution() {
    let dir = tempfile::tempdir().unwrap();
    let text = "(set-logic LIA)
(synth-fun f ((x Int)) Int ((S Int) (A Int)) ((S Int (A (+ A A))) (A Int (x 0 1))))
(constraint (= (f 0) 0))
(constraint (= (f 0) 1))
(check-synth)
";
    let r = run_file(&write(dir.path(), "p.sy", text), &[]);
    assert_eq!((r.code, r.stdout.as_str()), (1, "no-solution\n"));
}

#[test]
fn iteration_limit_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    executable(dir.path(), "never", "echo false");
    let text = "(set-logic ALL)\n(declare-oracle-fun good (Int) Bool \"./never\")\n(declare-fun x () Int)\n\
                (assert (good x))\n(check-sat)\n";
    let r = run_file(&write(dir.path(), "p.smt2", text), &["--max-iterations", "3"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert_eq!(first_line(&r), "unknown");
}

#[test]
fn usage_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(&[dir.path().join("absent.smt2").to_str().unwrap()]);
    assert_eq!(missing.code, 3);
    assert!(missing.stderr.contains("absent.smt2"));

    let good = write(dir.path(), "ok.smt2", "(set-logic ALL)\n(declare-fun x () Int)\n(check-sat)\n");
    assert_eq!(run_file(&good, &["--no-such-flag"]).code, 3);
    assert_eq!(run_file(&good, &["--oracle-timeout", "0"]).code, 3);
    assert_eq!(run_file(&good, &["--oracle-timeout", "soon"]).code, 3);

    let broken = write(dir.path(), "bad.smt2", "(set-logic ALL)\n(assert (and true\n");
    let r = run_file(&broken, &[]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("bad.smt2:"), "{}", r.stderr);
    assert!(r.stdout.is_empty());

    let undeclared = write(dir.path(), "u.smt2", "(set-logic ALL)\n(assert (> y 0))\n(check-sat)\n");
    assert_eq!(run_file(&undeclared, &[]).code, 3);
}

#[test]
fn oracle_failures_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    executable(dir.path(), "isprime", "exit 7");
    let r = run_file(&write(dir.path(), "p.smt2", PRIME76), &[]);
    assert_eq!(r.code, 4);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.starts_with("delphi: error:"), "{}", r.stderr);
}

#[test]
fn report_is_written_as_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    successor_oracles(dir.path());
    let report = dir.path().join("run.jsonl");
    let problem = write(dir.path(), "pbe_succ.sy", PBE_SUCC);
    let r = run_file(&problem, &["--report", report.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let text = std::fs::read_to_string(&report).unwrap();
    let events: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let kinds: Vec<&str> = events.iter().map(|e| e["event"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"candidate"));
    assert!(kinds.contains(&"oracle-call"));
    assert_eq!(*kinds.last().unwrap(), "symo-result");
    assert_eq!(events.last().unwrap()["outcome"], "solution");
}

#[test]
fn verbose_mode_traces_to_stderr_only() {
    let dir = tempfile::tempdir().unwrap();
    stub(dir.path(), "isprime", "isprime", &[]);
    let problem = write(dir.path(), "p.smt2", PRIME76);
    let quiet = run_file(&problem, &[]);
    let loud = run_file(&problem, &["--verbose"]);
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(quiet.stderr.is_empty());
    assert!(loud.stderr.contains("oracle isPrime("), "{}", loud.stderr);
}
