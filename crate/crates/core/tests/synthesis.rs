use std::collections::HashSet;
use std::os::unix::fs::PermissionsExt;
use std::path::Path;

use delphi_core::frontend::{parse_script, print_term, Script};
use delphi_core::symo::{symo_solve, SymoProblem, SymoVerdict};
use delphi_core::synth::{
    check_candidate_against_store, emit_sygus, enumerate_terms, no_oracles, synthesize, Candidate, SynthMode,
    SynthTarget,
};
use delphi_core::term::{FunDef, Term, Value};
use delphi_core::{EngineError, Session};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn script(text: &str) -> Script {
    parse_script(text).unwrap()
}

fn target(synth_fun: &str) -> SynthTarget {
    script(&format!("(set-logic LIA)\n{synth_fun}\n(check-synth)\n")).targets.remove(0)
}

fn candidate(t: &SynthTarget, body: Term) -> Candidate {
    Candidate {
        definitions: vec![FunDef::new(t.name.clone(), t.params.clone(), body)],
    }
}

fn eval(t: &SynthTarget, body: &Term, x: i64) -> i64 {
    let c = candidate(t, body.clone());
    match c.definitions[0].to_value().unwrap() {
        Value::Lambda(l) => i64::try_from(l.apply(&[Value::int(x)]).unwrap().as_value().unwrap().as_int().unwrap().clone()).unwrap(),
        _ => unreachable!(),
    }
}

const PLUS_ONE: &str = "(synth-fun f ((x Int)) Int ((S Int)) ((S Int (x 1 (+ S S)))))";

fn catalan(n: u64) -> u64 {
    (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

#[test]
fn every_term_of_a_finite_language_appears_once() {
    let t = target("(synth-fun f ((x Int) (y Int)) Int ((S Int) (A Int)) ((S Int (A (+ A A) (- A))) (A Int (x y 0))))");
    let terms = enumerate_terms(&t, 20);
    let distinct: HashSet<String> = terms.iter().map(print_term).collect();
    assert_eq!(terms.len(), 3 + 9 + 3);
    assert_eq!(distinct.len(), terms.len());
}

#[test]
fn bounded_enumeration_of_a_recursive_language_is_exact() {
    let t = target(PLUS_ONE);
    let terms = enumerate_terms(&t, 7);
    // Trees with k additions have 2k + 1 nodes and k + 1 leaves of two kinds.
    let expected: u64 = (0..=3).map(|k| catalan(k) * 2u64.pow(k as u32 + 1)).sum();
    assert_eq!(terms.len() as u64, expected);
    let distinct: HashSet<String> = terms.iter().map(print_term).collect();
    assert_eq!(distinct.len(), terms.len());
    assert!(terms.windows(2).all(|w| w[0].size() <= w[1].size()));
}

fn store(text: &str) -> Vec<Term> {
    script(&format!("(set-logic LIA)\n{PLUS_ONE}\n{text}\n(check-synth)\n")).constraints
}

#[test]
fn builtin_candidates_are_minimal() {
    let t = target(PLUS_ONE);
    let cases: [(&str, fn(i64) -> i64); 3] = [
        ("(constraint (= (f 1) 3))\n(constraint (= (f 2) 5))", |x| 2 * x + 1),
        ("(constraint (= (f 0) 3))\n(constraint (= (f 5) 8))", |x| x + 3),
        ("(constraint (= (f 2) 4))\n(constraint (= (f 3) 6))", |x| 2 * x),
    ];
    for (text, reference) in cases {
        let s = store(text);
        let found = synthesize(&Session::default(), std::slice::from_ref(&t), &s, &mut no_oracles)
            .unwrap()
            .expect("a solution exists");
        let body = &found.definitions[0].body;
        let smallest = enumerate_terms(&t, 11)
            .into_iter()
            .find(|b| check_candidate_against_store(&candidate(&t, b.clone()), &s, &mut no_oracles).unwrap())
            .unwrap();
        assert_eq!(body.size(), smallest.size(), "{}", print_term(body));
        for x in 0..6 {
            assert_eq!(eval(&t, body, x), reference(x));
        }
    }
}

#[test]
fn rejection_survives_store_growth() {
    let t = target(PLUS_ONE);
    let small = store("(constraint (>= (f 1) 2))");
    let large = store("(constraint (>= (f 1) 2))\n(constraint (<= (f 3) 7))\n(constraint (distinct (f 0) 2))");
    let terms = enumerate_terms(&t, 9);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rejected = 0;
    for _ in 0..200 {
        let c = candidate(&t, terms[rng.gen_range(0..terms.len())].clone());
        if !check_candidate_against_store(&c, &small, &mut no_oracles).unwrap() {
            rejected += 1;
            assert!(!check_candidate_against_store(&c, &large, &mut no_oracles).unwrap());
        }
    }
    assert!(rejected > 0);
}

#[test]
fn contradictory_examples_over_a_finite_language_have_no_solution() {
    let text = "(set-logic LIA)
(synth-fun f ((x Int)) Int ((S Int) (A Int)) ((S Int (A (+ A A))) (A Int (x 0 1))))
(constraint (= (f 0) 0))
(constraint (= (f 0) 1))
(check-synth)
";
    let s = script(text);
    let p = SymoProblem::from_script(&s).unwrap();
    let outcome = symo_solve(&Session::default(), &p).unwrap();
    assert_eq!(outcome.verdict, SymoVerdict::NoSolution);
}

#[test]
fn infinite_languages_stop_at_the_budget() {
    let s = store("(constraint (= (f 0) 0))\n(constraint (= (f 0) 1))");
    let mut session = Session::default();
    session.limits.max_candidate_size = 9;
    let r = synthesize(&session, &[target(PLUS_ONE)], &s, &mut no_oracles);
    assert!(matches!(r, Err(EngineError::BudgetExhausted(_))), "{r:?}");
}

#[test]
fn several_targets_are_synthesized_together() {
    let text = "(set-logic LIA)
(synth-fun f ((x Int)) Int ((S Int)) ((S Int (x 1 (+ S S)))))
(synth-fun g ((x Int)) Int ((S Int)) ((S Int (x 1 (+ S S)))))
(constraint (= (f 1) 2))
(constraint (= (g (f 1)) 5))
(check-synth)
";
    let s = script(text);
    let c = synthesize(&Session::default(), &s.targets, &s.constraints, &mut no_oracles)
        .unwrap()
        .unwrap();
    assert!(check_candidate_against_store(&c, &s.constraints, &mut no_oracles).unwrap());
}

fn fake_solver(dir: &Path, answer: &str) -> SynthMode {
    let path = dir.join("solver");
    std::fs::write(&path, format!("#!/bin/sh\ncat \"$1\" > '{}'\necho '{answer}'\n", dir.join("seen.sl").display())).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    SynthMode::from_command_line(path.to_str().unwrap()).unwrap()
}

#[test]
fn external_solvers_receive_the_store_as_sygus() {
    let dir = tempfile::tempdir().unwrap();
    let t = target(PLUS_ONE);
    let s = store("(constraint (= (f 1) 2))");
    let session = Session {
        synth: fake_solver(dir.path(), "(define-fun f ((x Int)) Int (+ x 1))"),
        ..Session::default()
    };
    let c = synthesize(&session, std::slice::from_ref(&t), &s, &mut no_oracles).unwrap().unwrap();
    assert_eq!(print_term(&c.definitions[0].body), "(+ x 1)");
    let sent = std::fs::read_to_string(dir.path().join("seen.sl")).unwrap();
    assert_eq!(sent, emit_sygus(&[t], &s).unwrap());
    assert_eq!(
        sent,
        "(set-logic ALL)\n(synth-fun f ((x Int)) Int\n  ((S Int))\n  ((S Int (x 1 (+ S S)))))\n(constraint (= (f 1) 2))\n(check-synth)\n"
    );
}

#[test]
fn external_solver_answers_are_interpreted() {
    let dir = tempfile::tempdir().unwrap();
    let t = target(PLUS_ONE);
    let s = store("(constraint (= (f 1) 2))");
    let run = |answer: &str| {
        let session = Session {
            synth: fake_solver(dir.path(), answer),
            ..Session::default()
        };
        synthesize(&session, std::slice::from_ref(&t), &s, &mut no_oracles)
    };
    assert!(matches!(run("infeasible"), Ok(None)));
    assert!(matches!(run("fail"), Err(EngineError::ExternalSolver(_))));
    assert!(matches!(run("(define-fun g ((x Int)) Int x)"), Err(EngineError::ExternalSolver(_))));
    assert!(matches!(run("(define-fun f ((x Int)) Bool true)"), Err(EngineError::ExternalSolver(_))));
}
