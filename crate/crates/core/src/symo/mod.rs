//! Synthesis modulo oracles.
//!
//! Each iteration synthesizes a candidate from the store `S`, verifies it
//! with the satisfiability loop (the specification variables become
//! constants and the candidate is substituted into `¬φ`), and on failure
//! refines `S` with the specification at the counterexample point plus the
//! constraints produced by oracles.

mod infer;
mod templates;

use std::collections::{HashMap, HashSet};

use indexmap::{IndexMap, IndexSet};

pub use infer::infer_oracle_inputs;
pub use templates::{standard_interface, TemplateBinding, TemplateError, TEMPLATES};

use crate::backend::{check_sat, collect_declarations, Declarations, Model, Verdict};
use crate::frontend::{print_define_fun, print_value, Directive, Script};
use crate::oracle::{AssumptionSet, OracleInterface};
use crate::report::Event;
use crate::session::{EngineError, Session};
use crate::smto::{emit_call, smto_solve, SmtoOutcome, SmtoProblem, SmtoVerdict};
use crate::synth::{synthesize, Candidate, SynthTarget};
use crate::term::{
    apply_definitions, find_oracle_application, partial_evaluate, replace_at, substitute, Binding, FunSig, Sort,
    SymbolKind, Term, Value,
};

/// Target functions, oracle symbols, a universally quantified specification
/// and the oracle interfaces that inform them.
#[derive(Debug, Clone)]
pub struct SymoProblem {
    pub targets: Vec<SynthTarget>,
    pub oracles: IndexMap<String, FunSig>,
    /// The universally quantified variables `x̄`.
    pub variables: Vec<(String, Sort)>,
    pub spec: Term,
    /// Interfaces defining the oracle symbols, used during verification.
    pub definitional: Vec<OracleInterface>,
    /// Constraint-only interfaces, queried after a failed verification.
    pub free: Vec<OracleInterface>,
}

impl SymoProblem {
    pub fn new(
        targets: Vec<SynthTarget>,
        oracles: IndexMap<String, FunSig>,
        variables: Vec<(String, Sort)>,
        spec: Term,
        interfaces: Vec<OracleInterface>,
    ) -> Result<Self, EngineError> {
        if targets.is_empty() {
            return Err(EngineError::Unsupported("no function to synthesize".into()));
        }
        let (definitional, free): (Vec<_>, Vec<_>) =
            interfaces.into_iter().partition(|i| i.defined_symbol().is_some());
        if let Some(i) = free.iter().find(|i| i.assumption.is_some()) {
            return Err(EngineError::Unsupported(format!(
                "interface {} generates assumptions without defining an oracle symbol",
                i.name
            )));
        }
        let mut defined = HashSet::new();
        for i in &definitional {
            let theta = i.defined_symbol().expect("partitioned");
            if !defined.insert(theta.to_string()) {
                return Err(crate::frontend::FrontendError::DuplicateOracleDefinition(theta.into()).into());
            }
            if !oracles.contains_key(theta) {
                return Err(EngineError::Unsupported(format!("interface for undeclared oracle {theta}")));
            }
        }
        for theta in oracles.keys() {
            if !defined.contains(theta) {
                return Err(crate::frontend::FrontendError::MissingOracleDefinition(theta.clone()).into());
            }
        }
        for v in spec.free_vars() {
            if !variables.iter().any(|(x, _)| *x == v) {
                return Err(EngineError::Unsupported(format!("free variable {v} in specification")));
            }
        }
        for f in spec.symbols(SymbolKind::Ordinary) {
            if !targets.iter().any(|t| t.name == f) {
                return Err(EngineError::Unsupported(format!("{f} is neither a target nor a variable")));
            }
        }
        for (x, _) in &variables {
            if targets.iter().any(|t| t.name == *x) {
                return Err(EngineError::Unsupported(format!("{x} is both a variable and a target")));
            }
        }
        Ok(SymoProblem {
            targets,
            oracles,
            variables,
            spec,
            definitional,
            free,
        })
    }

    pub fn from_script(script: &Script) -> Result<Self, EngineError> {
        if script.directive != Directive::CheckSynth {
            return Err(EngineError::Unsupported("expected a check-synth problem".into()));
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
            script.targets.clone(),
            oracles,
            script.env.variables.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Term::and(script.constraints.clone()),
            script.interfaces.clone(),
        )
    }

    fn is_target(&self, name: &str) -> bool {
        self.targets.iter().any(|t| t.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymoVerdict {
    Solution(Candidate),
    NoSolution,
    Unknown(String),
}

/// A constraint-producing oracle call made after a failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseTwoCall {
    pub interface: String,
    pub inputs: Vec<Value>,
    pub outputs: Vec<Value>,
    pub constraint: Option<Term>,
}

#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub candidate: Candidate,
    /// The store the candidate was synthesized from.
    pub store: Vec<Term>,
    /// Conjuncts that constrain a target as a whole, such as `θ(f)`.
    pub blocking: Vec<Term>,
    pub verified: bool,
    /// Values of `x̄` refuting the candidate.
    pub counterexample: Vec<(String, Value)>,
    pub phase_two: Vec<PhaseTwoCall>,
    /// Size of `A` after verification.
    pub assumptions: usize,
}

#[derive(Debug, Clone)]
pub struct SymoOutcome {
    pub verdict: SymoVerdict,
    pub iterations: usize,
    pub assumptions: AssumptionSet,
    pub store: Vec<Term>,
    pub log: Vec<IterationRecord>,
}

impl SymoOutcome {
    /// Number of constraints contributed by oracle calls, across the run.
    pub fn oracle_constraints(&self) -> usize {
        self.log
            .iter()
            .flat_map(|r| &r.phase_two)
            .filter(|c| c.constraint.is_some())
            .count()
    }
}

/// Runs the loop until a candidate passes verification, the store becomes
/// unsatisfiable in the grammar, or a limit is hit.
pub fn symo_solve(session: &Session, p: &SymoProblem) -> Result<SymoOutcome, EngineError> {
    let mut a = AssumptionSet::new();
    let mut store: IndexSet<Term> = IndexSet::new();
    let mut blocking: IndexSet<Term> = IndexSet::new();
    let mut issued: HashSet<(String, Vec<Value>)> = HashSet::new();
    let mut log = Vec::new();
    let mut iteration = 0;
    let finish = |verdict: SymoVerdict,
                  iterations: usize,
                  a: AssumptionSet,
                  store: &IndexSet<Term>,
                  log: Vec<IterationRecord>| {
        let outcome = match &verdict {
            SymoVerdict::Solution(_) => "solution".to_string(),
            SymoVerdict::NoSolution => "no solution".to_string(),
            SymoVerdict::Unknown(r) => format!("unknown ({r})"),
        };
        session.emit(Event::SymoResult { outcome, iterations });
        SymoOutcome {
            verdict,
            iterations,
            assumptions: a,
            store: store.iter().cloned().collect(),
            log,
        }
    };
    loop {
        if let Some(max) = session.limits.max_iterations {
            if iteration >= max {
                return Err(EngineError::IterationLimit(max));
            }
        }
        iteration += 1;
        let snapshot: Vec<Term> = store.iter().cloned().collect();
        let query: Vec<Term> = store.iter().chain(&blocking).cloned().collect();
        let found = {
            let mut resolver = StoreResolver::new(session, &a);
            synthesize(session, &p.targets, &query, &mut |t: &Term| resolver.resolve(t))
        };
        let candidate = match found {
            Ok(Some(c)) => c,
            Ok(None) => return Ok(finish(SymoVerdict::NoSolution, iteration, a, &store, log)),
            Err(EngineError::BudgetExhausted(r)) => {
                return Ok(finish(SymoVerdict::Unknown(r), iteration, a, &store, log))
            }
            Err(e) => return Err(e),
        };
        session.emit(Event::Candidate {
            iteration,
            definitions: candidate.definitions.iter().map(print_define_fun).collect(),
        });
        let check = verify_candidate(session, p, &candidate, a.clone())?;
        a = check.assumptions.clone();
        let mut record = IterationRecord {
            candidate: candidate.clone(),
            store: snapshot,
            blocking: blocking.iter().cloned().collect(),
            verified: false,
            counterexample: Vec::new(),
            phase_two: Vec::new(),
            assumptions: a.len(),
        };
        let model = match check.verdict {
            SmtoVerdict::Unsat => {
                session.emit(Event::Verification {
                    iteration,
                    verdict: "valid".into(),
                });
                record.verified = true;
                log.push(record);
                return Ok(finish(SymoVerdict::Solution(candidate), iteration, a, &store, log));
            }
            SmtoVerdict::Unknown(r) => {
                session.emit(Event::Verification {
                    iteration,
                    verdict: format!("unknown ({r})"),
                });
                log.push(record);
                return Ok(finish(SymoVerdict::Unknown(r), iteration, a, &store, log));
            }
            SmtoVerdict::Sat(m) => m,
        };
        session.emit(Event::Verification {
            iteration,
            verdict: "refuted".into(),
        });
        let before = (store.len(), blocking.len());

        let point = counterexample_point(p, &model)?;
        session.emit(Event::Counterexample {
            iteration,
            values: point.iter().map(|(x, v)| (x.clone(), print_value(v))).collect(),
        });
        let binding: Binding = point.iter().map(|(x, v)| (x.clone(), Term::Value(v.clone()))).collect();
        let phi_inst = partial_evaluate(&substitute(&p.spec, &binding)?)?;
        for c in phi_inst.conjuncts() {
            if mentions_bare_target(p, &c) {
                blocking.insert(c);
            } else {
                store.insert(c);
            }
        }
        record.counterexample = point;

        // constraints carried by the definitional calls of the verification run
        for call in &check.calls {
            let Some(iface) = p.definitional.iter().find(|i| i.name == call.interface) else { continue };
            if iface.constraint.is_none() {
                continue;
            }
            let (_, beta) = iface.instantiate(&call.inputs, &call.outputs)?;
            add_constraint(p, &mut store, &mut blocking, beta.clone());
            record.phase_two.push(PhaseTwoCall {
                interface: iface.name.clone(),
                inputs: call.inputs.clone(),
                outputs: call.outputs.clone(),
                constraint: beta,
            });
        }

        for (index, inputs) in infer_oracle_inputs(&p.free, &p.targets, &phi_inst, &candidate) {
            let iface = &p.free[index];
            if !issued.insert((iface.name.clone(), inputs.clone())) {
                continue;
            }
            let outcome = session.oracles.call(iface, &inputs)?;
            emit_call(session, iface, &inputs, &outcome);
            let (_, beta) = iface.instantiate(&inputs, &outcome.outputs)?;
            add_constraint(p, &mut store, &mut blocking, beta.clone());
            record.phase_two.push(PhaseTwoCall {
                interface: iface.name.clone(),
                inputs,
                outputs: outcome.outputs,
                constraint: beta,
            });
        }

        session.emit(Event::Store {
            iteration,
            constraints: store.len() + blocking.len(),
            assumptions: a.len(),
        });
        log.push(record);
        if (store.len(), blocking.len()) == before {
            return Err(EngineError::InternalProgressFailure(
                "a refuted candidate added nothing to the synthesis store".into(),
            ));
        }
    }
}

fn add_constraint(p: &SymoProblem, store: &mut IndexSet<Term>, blocking: &mut IndexSet<Term>, beta: Option<Term>) {
    for c in beta.iter().flat_map(Term::conjuncts) {
        if mentions_bare_target(p, &c) {
            blocking.insert(c);
        } else {
            store.insert(c);
        }
    }
}

/// True when a target occurs unapplied, as in `θ(f)`.
fn mentions_bare_target(p: &SymoProblem, t: &Term) -> bool {
    let mut found = false;
    t.visit_apps(&mut |app| {
        found |= app.symbol.kind == SymbolKind::Ordinary
            && app.args.is_empty()
            && app.sort.is_function()
            && p.is_target(&app.symbol.name)
    });
    found
}

fn counterexample_point(p: &SymoProblem, model: &Model) -> Result<Vec<(String, Value)>, EngineError> {
    p.variables
        .iter()
        .map(|(x, s)| {
            let v = match model.get(x) {
                Some(def) => def.body.as_value().cloned().ok_or_else(|| {
                    EngineError::Unsupported(format!("counterexample value of {x} is not a literal"))
                })?,
                None => s.default_value(),
            };
            Ok((x.clone(), v))
        })
        .collect()
}

/// Checks `f̄*` against the specification with the satisfiability loop,
/// seeded with `seed`. The variables `x̄` are the free constants of the
/// sub-problem.
pub fn verify_candidate(
    session: &Session,
    p: &SymoProblem,
    candidate: &Candidate,
    seed: AssumptionSet,
) -> Result<SmtoOutcome, EngineError> {
    let lifted: Binding = p
        .variables
        .iter()
        .map(|(x, s)| (x.clone(), Term::ordinary(x.clone(), vec![], s.clone())))
        .collect();
    let negated = Term::not(substitute(&p.spec, &lifted)?);
    let formula = partial_evaluate(&apply_definitions(&negated, &candidate.table())?)?;
    let functions = p
        .variables
        .iter()
        .map(|(x, s)| (x.clone(), FunSig::constant(s.clone())))
        .collect();
    let problem = SmtoProblem::new(functions, p.oracles.clone(), formula, p.definitional.clone())?;
    smto_solve(session, &problem, seed)
}

/// Decides store conjuncts that still contain oracle applications after a
/// candidate is substituted: first from the assumptions, then by asking the
/// backend whether the conjunct is consistent with them.
struct StoreResolver<'a> {
    session: &'a Session,
    a: &'a AssumptionSet,
    cache: HashMap<Term, bool>,
}

impl<'a> StoreResolver<'a> {
    fn new(session: &'a Session, a: &'a AssumptionSet) -> Self {
        StoreResolver {
            session,
            a,
            cache: HashMap::new(),
        }
    }

    fn resolve(&mut self, t: &Term) -> Result<bool, EngineError> {
        let mut t = t.clone();
        while let Some(app) = find_oracle_application(&t) {
            let Some(d) = self.a.lookup(&app.symbol, &app.args) else { break };
            t = partial_evaluate(&replace_at(&t, &app.position, d.clone())?)?;
        }
        if let Some(b) = t.as_value().and_then(Value::as_bool) {
            return Ok(b);
        }
        if let Some(&b) = self.cache.get(&t) {
            return Ok(b);
        }
        let oracles = t.symbols(SymbolKind::Oracle);
        let mut conjuncts = vec![t.clone()];
        for (theta, args, d) in self.a.iter() {
            if oracles.contains(theta) {
                let app = Term::oracle(theta, args.iter().cloned().map(Term::Value).collect(), d.sort());
                conjuncts.push(Term::eq(app, Term::Value(d.clone()))?);
            }
        }
        let formula = Term::and(conjuncts);
        let mut decls = Declarations::new();
        collect_declarations(&formula, &mut decls);
        let answer = match check_sat(&self.session.backend, &decls, &formula)?.verdict {
            Verdict::Unsat => false,
            Verdict::Sat | Verdict::Unknown(_) => true,
        };
        self.cache.insert(t, answer);
        Ok(answer)
    }
}

/// Renders a solution the way the command line prints it.
pub fn print_solution(c: &Candidate) -> String {
    c.definitions.iter().map(print_define_fun).collect::<Vec<_>>().join("\n")
}
