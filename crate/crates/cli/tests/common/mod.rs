#![allow(dead_code)]

use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use delphi_core::backend::BackendConfig;
use delphi_core::frontend::{parse_definitions, parse_script, Env};
use delphi_core::symo::SymoProblem;
use delphi_core::term::{FunDef, Value};
use delphi_core::Session;

pub const DELPHI: &str = env!("CARGO_BIN_EXE_delphi");
pub const STUB: &str = env!("CARGO_BIN_EXE_delphi-stub-oracle");

/// Writes an executable shell script `dir/name` that runs the stub oracle in
/// `mode`, with `extra` arguments placed before the solver's inputs.
pub fn stub(dir: &Path, name: &str, mode: &str, extra: &[&Path]) -> PathBuf {
    let path = dir.join(name);
    let extra: Vec<String> = extra.iter().map(|p| format!("'{}'", p.display())).collect();
    let script = format!("#!/bin/sh\nexec '{STUB}' {mode} {} \"$@\"\n", extra.join(" "));
    std::fs::write(&path, script).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

pub fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

pub fn delphi(args: &[&str]) -> Output {
    Command::new(DELPHI).args(args).output().expect("delphi runs")
}

pub fn session() -> Session {
    Session::new(BackendConfig::default())
}

pub fn symo_problem(path: &Path) -> SymoProblem {
    let text = std::fs::read_to_string(path).unwrap();
    let mut script = parse_script(&text).unwrap();
    script.resolve_executables(path.parent().unwrap());
    SymoProblem::from_script(&script).unwrap()
}

/// The `define-fun` lines of a solver answer, skipping a leading verdict line.
pub fn definitions(stdout: &str) -> Vec<FunDef> {
    let body: String = stdout.lines().filter(|l| l.starts_with('(')).collect::<Vec<_>>().join("\n");
    parse_definitions(&body, &Env::default()).unwrap()
}

pub fn int_of(v: &Value) -> i64 {
    i64::try_from(v.as_int().expect("integer value").clone()).unwrap()
}

/// Applies a definition to integer arguments.
pub fn apply_int(def: &FunDef, args: &[i64]) -> Value {
    let args: Vec<Value> = args.iter().map(|&a| Value::int(a)).collect();
    match def.to_value().unwrap() {
        Value::Lambda(l) => l.apply(&args).unwrap().as_value().cloned().expect("ground result"),
        v => v,
    }
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && (0..=n).take_while(|r| r * r <= n).any(|r| r * r == n)
}

pub fn is_triangle(n: i64) -> bool {
    n >= 0 && (0..=n).take_while(|k| k * (k + 1) / 2 <= n).any(|k| k * (k + 1) / 2 == n)
}
