use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use delphi_core::frontend::print_term;
use delphi_core::oracle::{AssumptionSet, OracleError, OracleInterface, OracleRuntime};
use delphi_core::term::{partial_evaluate, substitute, BitVecValue, Binding, Lambda, Sort, Term, Value};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

fn definitional(name: &str, domain: Vec<Sort>, codomain: Sort, exe: PathBuf) -> OracleInterface {
    let query: Vec<(String, Sort)> = domain.iter().enumerate().map(|(i, s)| (format!("y{i}"), s.clone())).collect();
    let app = Term::oracle(name, query.iter().map(|(y, s)| Term::var(y, s.clone())).collect(), codomain.clone());
    let alpha = Term::eq(app, Term::var("z", codomain.clone())).unwrap();
    OracleInterface::new(name, query, vec![("z".into(), codomain)], Some(alpha), None, exe).unwrap()
}

fn free(query: Vec<(&str, Sort)>, response: Vec<(&str, Sort)>, beta: Term, exe: PathBuf) -> OracleInterface {
    let own = |v: Vec<(&str, Sort)>| v.into_iter().map(|(x, s)| (x.to_string(), s)).collect();
    OracleInterface::new("free", own(query), own(response), None, Some(beta), exe).unwrap()
}

#[test]
fn repeated_queries_are_answered_from_the_memo() {
    let dir = tempfile::tempdir().unwrap();
    let succ = definitional("succ", vec![Sort::Int], Sort::Int, script(dir.path(), "succ", "echo $(($1 + 1))"));
    let rt = OracleRuntime::new();
    for _ in 0..5 {
        let out = rt.call(&succ, &[Value::int(41)]).unwrap();
        assert_eq!(out.outputs, vec![Value::int(42)]);
    }
    assert_eq!(rt.spawn_count(), 1);
    let records = rt.records();
    assert_eq!(records.len(), 5);
    assert_eq!(records.iter().filter(|r| r.cached).count(), 4);
    assert!(records.iter().all(|r| r.outputs == vec![Value::int(42)]));
}

#[test]
fn spawns_never_exceed_a_finite_input_domain() {
    let dir = tempfile::tempdir().unwrap();
    let exe = script(dir.path(), "bvnot", "case $1 in '#b00') echo '#b11';; '#b01') echo '#b10';; '#b10') echo '#b01';; *) echo '#b00';; esac");
    let iface = definitional("flip", vec![Sort::BitVec(2)], Sort::BitVec(2), exe);
    let rt = OracleRuntime::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let v = rng.gen_range(0..4u64);
        let out = rt.call(&iface, &[Value::BitVec(BitVecValue::from_u64(2, v))]).unwrap();
        assert_eq!(out.outputs, vec![Value::BitVec(BitVecValue::from_u64(2, 3 - v))]);
    }
    assert!(rt.spawn_count() <= 4);
}

#[test]
fn constraint_only_interfaces_are_not_memoized() {
    let dir = tempfile::tempdir().unwrap();
    let exe = script(dir.path(), "seven", "echo 7");
    let beta = Term::eq(Term::var("z", Sort::Int), Term::int(7)).unwrap();
    let iface = free(vec![], vec![("z", Sort::Int)], beta, exe);
    let rt = OracleRuntime::new();
    rt.call(&iface, &[]).unwrap();
    rt.call(&iface, &[]).unwrap();
    assert_eq!(rt.spawn_count(), 2);
}

#[test]
fn slow_oracles_time_out() {
    let dir = tempfile::tempdir().unwrap();
    let iface = definitional("slow", vec![Sort::Int], Sort::Int, script(dir.path(), "slow", "sleep 5\necho 1"));
    let rt = OracleRuntime::new().with_timeout(Duration::from_millis(200));
    let start = Instant::now();
    let err = rt.call(&iface, &[Value::int(0)]).unwrap_err();
    assert!(matches!(err, OracleError::Timeout { .. }), "{err:?}");
    assert!(start.elapsed() < Duration::from_secs(3));
}

#[test]
fn failures_are_reported_by_kind() {
    let dir = tempfile::tempdir().unwrap();
    let rt = OracleRuntime::new();
    let crash = definitional("c", vec![Sort::Int], Sort::Int, script(dir.path(), "crash", "echo boom >&2\nexit 3"));
    match rt.call(&crash, &[Value::int(0)]) {
        Err(OracleError::Crash { stderr, .. }) => assert_eq!(stderr, "boom"),
        other => panic!("{other:?}"),
    }
    let garbage = definitional("g", vec![Sort::Int], Sort::Int, script(dir.path(), "garbage", "echo banana"));
    assert!(matches!(rt.call(&garbage, &[Value::int(0)]), Err(OracleError::MalformedResponse { .. })));
    let chatty = definitional("t", vec![Sort::Int], Sort::Int, script(dir.path(), "chatty", "echo 1 2"));
    assert!(matches!(rt.call(&chatty, &[Value::int(0)]), Err(OracleError::MalformedResponse { .. })));
    let missing = definitional("m", vec![Sort::Int], Sort::Int, dir.path().join("does-not-exist"));
    assert!(matches!(rt.call(&missing, &[Value::int(0)]), Err(OracleError::Spawn { .. })));
    let fine = definitional("f", vec![Sort::Int], Sort::Int, script(dir.path(), "fine", "echo 0"));
    assert!(matches!(rt.call(&fine, &[Value::Bool(true)]), Err(OracleError::BadQuery { .. })));
    assert!(matches!(rt.call(&fine, &[]), Err(OracleError::BadQuery { .. })));
}

#[test]
fn conflicting_answers_violate_functionality() {
    let mut a = AssumptionSet::new();
    assert!(a.insert("theta", vec![Value::int(1)], Value::Bool(true)).unwrap());
    assert!(!a.insert("theta", vec![Value::int(1)], Value::Bool(true)).unwrap());
    let err = a.insert("theta", vec![Value::int(1)], Value::Bool(false)).unwrap_err();
    assert!(matches!(err, OracleError::FunctionalViolation { .. }));
    assert_eq!(a.len(), 1);
}

#[test]
fn seed_is_exported_to_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let iface = definitional("s", vec![Sort::Int], Sort::Int, script(dir.path(), "seed", "echo ${DELPHI_ORACLE_SEED:-0}"));
    let seeded = OracleRuntime::new().with_seed(Some(1234));
    assert_eq!(seeded.call(&iface, &[Value::int(0)]).unwrap().outputs, vec![Value::int(1234)]);
    let unseeded = OracleRuntime::new();
    assert_eq!(unseeded.call(&iface, &[Value::int(0)]).unwrap().outputs, vec![Value::int(0)]);
}

#[test]
fn function_inputs_arrive_as_one_define_fun() {
    let dir = tempfile::tempdir().unwrap();
    let seen = dir.path().join("seen");
    let exe = script(dir.path(), "judge", &format!("printf '%s' \"$1\" > '{}'\necho $#", seen.display()));
    let fsort = Sort::Fn(vec![Sort::Int], Box::new(Sort::Int));
    let beta = Term::eq(Term::var("n", Sort::Int), Term::int(1)).unwrap();
    let iface = free(vec![("f", fsort)], vec![("n", Sort::Int)], beta, exe);
    let x = Term::var("x", Sort::Int);
    let lambda = Lambda {
        params: vec![("x".into(), Sort::Int)],
        body: Box::new(Term::theory("+", vec![x, Term::int(1)]).unwrap()),
    };
    let out = OracleRuntime::new().call(&iface, &[Value::Lambda(lambda)]).unwrap();
    assert_eq!(out.outputs, vec![Value::int(1)]);
    assert_eq!(std::fs::read_to_string(seen).unwrap(), "(define-fun f ((x Int)) Int (+ x 1))");
}

fn random_value(rng: &mut ChaCha8Rng, sort: &Sort) -> Value {
    match sort {
        Sort::Bool => Value::Bool(rng.gen()),
        Sort::Int => Value::int(rng.gen_range(-1_000_000..1_000_000)),
        Sort::Real => Value::Real(BigRational::new(
            BigInt::from(rng.gen_range(-500..500)),
            BigInt::from(rng.gen_range(1..40)),
        )),
        Sort::BitVec(w) => Value::BitVec(BitVecValue::from_u64(*w, rng.gen_range(0..1u64 << *w))),
        Sort::String => {
            let alphabet: Vec<char> = "ab cZ9\"'_-".chars().collect();
            let n = rng.gen_range(0..8);
            Value::String((0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect())
        }
        Sort::Fn(..) => unreachable!(),
    }
}

#[test]
fn values_survive_the_process_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let sorts = vec![Sort::Int, Sort::Bool, Sort::BitVec(5), Sort::Real, Sort::String];
    let query: Vec<(String, Sort)> = sorts.iter().enumerate().map(|(i, s)| (format!("y{i}"), s.clone())).collect();
    let response: Vec<(String, Sort)> = sorts.iter().enumerate().map(|(i, s)| (format!("z{i}"), s.clone())).collect();
    let beta = Term::eq(Term::var("z1", Sort::Bool), Term::var("y1", Sort::Bool)).unwrap();
    let iface = OracleInterface::new("echo", query, response, None, Some(beta), script(dir.path(), "echo", "echo \"$@\"")).unwrap();
    let rt = OracleRuntime::new();
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let inputs: Vec<Value> = sorts.iter().map(|s| random_value(&mut rng, s)).collect();
        assert_eq!(rt.call(&iface, &inputs).unwrap().outputs, inputs);
    }
}

#[test]
fn instantiation_is_substitution_then_folding() {
    let y = Term::var("y", Sort::Int);
    let z = Term::var("z", Sort::Int);
    let w = Term::var("w", Sort::Bool);
    let alpha = Term::eq(Term::oracle("theta", vec![Term::theory("+", vec![y.clone(), Term::int(0)]).unwrap()], Sort::Int), z.clone()).unwrap();
    let beta = Term::theory(
        "=>",
        vec![
            w.clone(),
            Term::theory("<=", vec![Term::ordinary("f", vec![Term::theory("*", vec![Term::int(2), y.clone()]).unwrap()], Sort::Int), z.clone()]).unwrap(),
        ],
    )
    .unwrap();
    let iface = OracleInterface::new(
        "mixed",
        vec![("y".into(), Sort::Int)],
        vec![("z".into(), Sort::Int), ("w".into(), Sort::Bool)],
        Some(alpha.clone()),
        Some(beta.clone()),
        "/bin/true",
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (c, d, b) = (rng.gen_range(-50..50), rng.gen_range(-50..50), rng.gen::<bool>());
        let binding: Binding = [
            ("y".to_string(), Term::int(c)),
            ("z".to_string(), Term::int(d)),
            ("w".to_string(), Term::bool(b)),
        ]
        .into();
        let expect = |t: &Term| partial_evaluate(&substitute(t, &binding).unwrap()).unwrap();
        let (a, bt) = iface.instantiate(&[Value::int(c)], &[Value::int(d), Value::Bool(b)]).unwrap();
        assert_eq!(a.unwrap(), expect(&alpha));
        assert_eq!(bt.unwrap(), expect(&beta));
    }
    let (_, bt) = iface.instantiate(&[Value::int(3)], &[Value::int(1), Value::Bool(true)]).unwrap();
    assert_eq!(print_term(&bt.unwrap()), "(<= (f 6) 1)");
}
