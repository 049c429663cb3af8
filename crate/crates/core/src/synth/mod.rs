//! The synthesis step: find functions satisfying a ground constraint store.

mod enumerate;
mod external;
pub mod grammar;

use std::collections::HashMap;

use crate::session::{EngineError, Session};
use crate::term::{apply_definitions, partial_evaluate, FunDef, FunSig, FunctionTable, Sort, SymbolKind, Term, Value};

pub use enumerate::enumerate_terms;
pub use external::emit_sygus;
use grammar::Grammar;

/// A function to synthesize.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthTarget {
    pub name: String,
    pub params: Vec<(String, Sort)>,
    pub codomain: Sort,
    pub grammar: Option<Grammar>,
}

impl SynthTarget {
    pub fn sig(&self) -> FunSig {
        FunSig::new(self.params.iter().map(|(_, s)| s.clone()).collect(), self.codomain.clone())
    }

    pub fn grammar_or_default(&self) -> Grammar {
        self.grammar
            .clone()
            .unwrap_or_else(|| Grammar::default_for(&self.params, &self.codomain))
    }
}

/// One definition per target, in target order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub definitions: Vec<FunDef>,
}

impl Candidate {
    pub fn table(&self) -> FunctionTable {
        self.definitions.iter().map(|d| (d.name.clone(), d.clone())).collect()
    }

    pub fn get(&self, name: &str) -> Option<&FunDef> {
        self.definitions.iter().find(|d| d.name == name)
    }

    /// Function values of the definitions, keyed by target name.
    pub fn values(&self) -> Vec<(String, Value)> {
        self.definitions
            .iter()
            .filter_map(|d| d.to_value().map(|v| (d.name.clone(), v)))
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum SynthMode {
    /// Bottom-up grammar enumeration.
    #[default]
    Builtin,
    /// An external SyGuS-IF solver, given the benchmark path as its last argument.
    External { program: String, args: Vec<String> },
}

impl SynthMode {
    pub fn from_command_line(cmd: &str) -> Option<Self> {
        let mut words = cmd.split_whitespace().map(str::to_string);
        Some(SynthMode::External {
            program: words.next()?,
            args: words.collect(),
        })
    }
}

/// Decides conjuncts that still contain oracle applications once the
/// candidate has been substituted.
pub type Resolver<'a> = dyn FnMut(&Term) -> Result<bool, EngineError> + 'a;

/// A resolver for stores without oracle symbols.
pub fn no_oracles(t: &Term) -> Result<bool, EngineError> {
    Err(EngineError::Unsupported(format!(
        "constraint {} cannot be decided without oracles",
        crate::frontend::print_term(t)
    )))
}

/// Checks a candidate against the store: each conjunct, with the candidate
/// substituted, must partially evaluate to `true`. Conjuncts left with
/// oracle applications go to `resolve`.
pub fn check_candidate_against_store(
    candidate: &Candidate,
    store: &[Term],
    resolve: &mut Resolver<'_>,
) -> Result<bool, EngineError> {
    let table = candidate.table();
    for c in store {
        if !check_conjunct(&table, c, resolve)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_conjunct(table: &FunctionTable, c: &Term, resolve: &mut Resolver<'_>) -> Result<bool, EngineError> {
    let t = partial_evaluate(&apply_definitions(c, table)?)?;
    match t.as_value() {
        Some(Value::Bool(b)) => Ok(*b),
        _ => resolve(&t),
    }
}

/// Finds a candidate satisfying `store`, or `None` when the grammar
/// languages are finite and exhausted.
pub fn synthesize(
    session: &Session,
    targets: &[SynthTarget],
    store: &[Term],
    resolve: &mut Resolver<'_>,
) -> Result<Option<Candidate>, EngineError> {
    match &session.synth {
        SynthMode::Builtin => enumerate::search(targets, store, &session.limits, resolve),
        SynthMode::External { program, args } => external::solve(program, args, targets, store),
    }
}

/// Argument tuples at which each target is applied in `store`, or `None`
/// for a target that also occurs in a non-point position (unapplied, or
/// applied to non-values).
pub(crate) fn application_points(targets: &[SynthTarget], store: &[Term]) -> HashMap<String, Option<Vec<Vec<Value>>>> {
    let mut out: HashMap<String, Option<Vec<Vec<Value>>>> =
        targets.iter().map(|t| (t.name.clone(), Some(Vec::new()))).collect();
    for c in store {
        c.visit_apps(&mut |app| {
            if app.symbol.kind != SymbolKind::Ordinary {
                return;
            }
            let Some(entry) = out.get_mut(&app.symbol.name) else { return };
            let values: Option<Vec<Value>> = app.args.iter().map(|a| a.as_value().cloned()).collect();
            match (entry.as_mut(), values) {
                (Some(points), Some(vs)) if !vs.is_empty() => {
                    if !points.contains(&vs) {
                        points.push(vs);
                    }
                }
                _ => *entry = None,
            }
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn succ() -> Candidate {
        let x = Term::var("x", Sort::Int);
        Candidate {
            definitions: vec![FunDef::new(
                "f",
                vec![("x".into(), Sort::Int)],
                Term::theory("+", vec![x, Term::int(1)]).unwrap(),
            )],
        }
    }

    fn f(arg: Term) -> Term {
        Term::ordinary("f", vec![arg], Sort::Int)
    }

    #[test]
    fn store_checks() {
        let s = vec![Term::eq(f(Term::int(1)), Term::int(2)).unwrap()];
        assert!(check_candidate_against_store(&succ(), &s, &mut no_oracles).unwrap());
        let id = Candidate {
            definitions: vec![FunDef::new("f", vec![("x".into(), Sort::Int)], Term::var("x", Sort::Int))],
        };
        assert!(!check_candidate_against_store(&id, &s, &mut no_oracles).unwrap());
    }

    #[test]
    fn residual_oracle_conjuncts_use_the_resolver() {
        let theta = Term::oracle("theta", vec![f(Term::int(3))], Sort::Bool);
        let mut cache = crate::oracle::AssumptionSet::new();
        cache.insert("theta", vec![Value::int(4)], Value::Bool(true)).unwrap();
        let mut resolve = |t: &Term| -> Result<bool, EngineError> {
            let Term::App(app) = t else { unreachable!() };
            let args: Vec<Value> = app.args.iter().map(|a| a.as_value().unwrap().clone()).collect();
            Ok(cache.lookup(&app.symbol.name, &args) == Some(&Value::Bool(true)))
        };
        assert!(check_candidate_against_store(&succ(), &[theta], &mut resolve).unwrap());
    }

    #[test]
    fn points() {
        let s = vec![
            Term::eq(f(Term::int(1)), Term::int(2)).unwrap(),
            Term::eq(f(Term::int(1)), f(Term::int(5))).unwrap(),
        ];
        let t = SynthTarget {
            name: "f".into(),
            params: vec![("x".into(), Sort::Int)],
            codomain: Sort::Int,
            grammar: None,
        };
        let p = application_points(std::slice::from_ref(&t), &s);
        assert_eq!(p["f"], Some(vec![vec![Value::int(1)], vec![Value::int(5)]]));
        let nested = vec![Term::eq(f(f(Term::int(1))), Term::int(3)).unwrap()];
        assert_eq!(application_points(&[t], &nested)["f"], None);
    }
}
