//! Satisfiability modulo oracles for the definitional fragment.
//!
//! The loop alternates between the SMT backend, which treats oracle symbols
//! as uninterpreted, and a consistency check that grounds the backend's
//! model against real oracle answers. Every refuted model contributes new
//! oracle equalities to the assumption set `A`, which only grows.

use indexmap::IndexMap;

use crate::backend::{check_sat, collect_declarations, Declarations, Model, Verdict};
use crate::frontend::{print_term, print_value, Directive, Script};
use crate::oracle::{AssumptionSet, CallOutcome, OracleCallRecord, OracleInterface};
use crate::report::Event;
use crate::session::{EngineError, Session};
use crate::term::{
    apply_definitions, find_oracle_application, partial_evaluate, replace_at, FunSig, SymbolKind, Term, Value,
};

/// A quantifier-free formula over declared functions and oracle symbols,
/// with one definitional interface per oracle symbol.
#[derive(Debug, Clone)]
pub struct SmtoProblem {
    pub functions: IndexMap<String, FunSig>,
    pub oracles: IndexMap<String, FunSig>,
    pub formula: Term,
    /// Defining interface of each oracle symbol.
    pub interfaces: IndexMap<String, OracleInterface>,
}

impl SmtoProblem {
    pub fn new(
        functions: IndexMap<String, FunSig>,
        oracles: IndexMap<String, FunSig>,
        formula: Term,
        interfaces: Vec<OracleInterface>,
    ) -> Result<Self, EngineError> {
        let mut by_symbol = IndexMap::new();
        for i in interfaces {
            let Some(theta) = i.defined_symbol().map(str::to_string) else {
                return Err(EngineError::Unsupported(format!(
                    "interface {} does not define an oracle symbol",
                    i.name
                )));
            };
            if by_symbol.insert(theta.clone(), i).is_some() {
                return Err(crate::frontend::FrontendError::DuplicateOracleDefinition(theta).into());
            }
        }
        for theta in oracles.keys() {
            if !by_symbol.contains_key(theta) {
                return Err(crate::frontend::FrontendError::MissingOracleDefinition(theta.clone()).into());
            }
        }
        if let Some(theta) = by_symbol.keys().find(|t| !oracles.contains_key(*t)) {
            return Err(EngineError::Unsupported(format!("interface for undeclared oracle {theta}")));
        }
        if let Some(v) = formula.free_vars().into_iter().next() {
            return Err(EngineError::Unsupported(format!("free variable {v} in formula")));
        }
        for f in formula.symbols(SymbolKind::Ordinary) {
            if !functions.contains_key(&f) {
                return Err(EngineError::Unsupported(format!("undeclared symbol {f}")));
            }
        }
        for t in formula.symbols(SymbolKind::Oracle) {
            if !oracles.contains_key(&t) {
                return Err(EngineError::Unsupported(format!("undeclared oracle symbol {t}")));
            }
        }
        Ok(SmtoProblem {
            functions,
            oracles,
            formula,
            interfaces: by_symbol,
        })
    }

    pub fn from_script(script: &Script) -> Result<Self, EngineError> {
        if script.directive != Directive::CheckSat {
            return Err(EngineError::Unsupported("expected a check-sat problem".into()));
        }
        let defined: Vec<&str> = script.interfaces.iter().filter_map(|i| i.defined_symbol()).collect();
        let oracles = script
            .env
            .oracles
            .iter()
            .filter(|(k, _)| defined.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Self::new(
            script.functions.clone(),
            oracles,
            Term::and(script.assertions.clone()),
            script.interfaces.clone(),
        )
    }

    fn declarations(&self) -> Declarations {
        self.functions.iter().chain(&self.oracles).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    fn function_declarations(&self) -> Declarations {
        self.functions.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmtoVerdict {
    Unsat,
    /// Model restricted to the ordinary symbols.
    Sat(Model),
    Unknown(String),
}

#[derive(Debug, Clone)]
pub struct SmtoOutcome {
    pub verdict: SmtoVerdict,
    /// The cumulative assumption set.
    pub assumptions: AssumptionSet,
    /// Backend queries issued.
    pub iterations: usize,
    /// Oracle calls made during this run, memo hits included.
    pub calls: Vec<OracleCallRecord>,
}

#[derive(Debug, Clone)]
pub struct Consistency {
    pub consistent: bool,
    pub assumptions: AssumptionSet,
}

/// Decides `p`, starting from the assumptions in `seed`.
pub fn smto_solve(session: &Session, p: &SmtoProblem, seed: AssumptionSet) -> Result<SmtoOutcome, EngineError> {
    let first_record = session.oracles.record_count();
    let decls = p.declarations();
    let fdecls = p.function_declarations();
    let mut a = seed;
    let mut iterations = 0;
    let finish = |verdict: SmtoVerdict, a: AssumptionSet, iterations: usize| {
        let shown = match &verdict {
            SmtoVerdict::Unsat => "unsat".to_string(),
            SmtoVerdict::Sat(_) => "sat".to_string(),
            SmtoVerdict::Unknown(r) => format!("unknown ({r})"),
        };
        session.emit(Event::SmtoResult {
            verdict: shown,
            iterations,
            assumptions: a.to_terms().iter().map(print_term).collect(),
        });
        SmtoOutcome {
            verdict,
            assumptions: a,
            iterations,
            calls: session.oracles.records_since(first_record),
        }
    };
    loop {
        if let Some(max) = session.limits.max_iterations {
            if iterations >= max {
                return Err(EngineError::IterationLimit(max));
            }
        }
        iterations += 1;
        let query = Term::and([p.formula.conjuncts(), a.to_terms()].concat());
        let result = check_sat(&session.backend, &decls, &query)?;
        let verdict_text = match &result.verdict {
            Verdict::Sat => "sat".to_string(),
            Verdict::Unsat => "unsat".to_string(),
            Verdict::Unknown(r) => format!("unknown ({r})"),
        };
        session.emit(Event::BackendCheck {
            iteration: iterations,
            verdict: verdict_text,
        });
        let mut model = match result.verdict {
            Verdict::Unsat => return Ok(finish(SmtoVerdict::Unsat, a, iterations)),
            Verdict::Unknown(reason) => return Ok(finish(SmtoVerdict::Unknown(reason), a, iterations)),
            Verdict::Sat => result.model.unwrap_or_default().restrict(p.functions.keys().map(String::as_str)),
        };
        for symbol in model.complete(&fdecls) {
            session.emit(Event::IncompleteModel { symbol });
        }
        let before = a.len();
        let check = consistency_check(session, p, &model, &a)?;
        a = check.assumptions;
        session.emit(Event::ConsistencyCheck {
            iteration: iterations,
            consistent: check.consistent,
            new_assumptions: a.len() - before,
        });
        if check.consistent {
            model = model.restrict(p.functions.keys().map(String::as_str));
            return Ok(finish(SmtoVerdict::Sat(model), a, iterations));
        }
        if a.len() == before {
            return Err(EngineError::InternalProgressFailure(
                "a refuted model produced no new oracle assumption".into(),
            ));
        }
    }
}

/// Grounds `ρ·{f̄ → f̄^M}` by resolving oracle applications innermost-first,
/// from `a` when possible and otherwise by calling the oracle. The returned
/// assumption set extends `a` with every answer obtained.
pub fn consistency_check(
    session: &Session,
    p: &SmtoProblem,
    model: &Model,
    a: &AssumptionSet,
) -> Result<Consistency, EngineError> {
    let mut a = a.clone();
    let table = model.restrict(p.functions.keys().map(String::as_str)).function_table();
    let mut mu = partial_evaluate(&apply_definitions(&p.formula, &table)?)?;
    while let Some(app) = find_oracle_application(&mu) {
        let d = match a.lookup(&app.symbol, &app.args) {
            Some(d) => d.clone(),
            None => {
                let iface = p.interfaces.get(&app.symbol).ok_or_else(|| {
                    EngineError::Unsupported(format!("no interface defines {}", app.symbol))
                })?;
                let d = call_definitional(session, iface, &app.args)?;
                a.insert(&app.symbol, app.args.clone(), d.clone())?;
                d
            }
        };
        mu = partial_evaluate(&replace_at(&mu, &app.position, d)?)?;
    }
    let consistent = match mu.as_value() {
        Some(Value::Bool(b)) => *b,
        Some(other) => {
            return Err(EngineError::Unsupported(format!(
                "formula evaluated to non-Boolean {}",
                print_value(other)
            )))
        }
        None if mu.contains_oracle() => {
            return Err(EngineError::InternalProgressFailure(format!(
                "oracle application with unevaluable arguments in {}",
                print_term(&mu)
            )))
        }
        None => decide_closed(session, &mu)?,
    };
    Ok(Consistency {
        consistent,
        assumptions: a,
    })
}

/// Calls a definitional oracle and returns its answer for `θ(args)`.
pub(crate) fn call_definitional(
    session: &Session,
    iface: &OracleInterface,
    args: &[Value],
) -> Result<Value, EngineError> {
    let outcome = session.oracles.call(iface, args)?;
    emit_call(session, iface, args, &outcome);
    let index = iface.defining_response().expect("definitional interface");
    Ok(outcome.outputs[index].clone())
}

pub(crate) fn emit_call(session: &Session, iface: &OracleInterface, inputs: &[Value], outcome: &CallOutcome) {
    session.emit(Event::OracleCall {
        interface: iface.name.clone(),
        inputs: inputs.iter().map(print_value).collect(),
        outputs: outcome.outputs.iter().map(print_value).collect(),
        cached: outcome.cached,
        millis: outcome.wall_time.as_millis() as u64,
    });
}

/// A closed, oracle-free formula that partial evaluation could not fold
/// (for instance a division by zero) is decided by the backend.
fn decide_closed(session: &Session, mu: &Term) -> Result<bool, EngineError> {
    let mut decls = Declarations::new();
    collect_declarations(mu, &mut decls);
    match check_sat(&session.backend, &decls, mu)?.verdict {
        Verdict::Sat => Ok(true),
        Verdict::Unsat => Ok(false),
        Verdict::Unknown(r) => Err(EngineError::Unsupported(format!(
            "backend could not decide {}: {r}",
            print_term(mu)
        ))),
    }
}
