//! Client for an external SMT-LIB solver. Every query runs in a fresh
//! process that receives a complete benchmark on stdin.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::process::Command;
use std::time::Duration;

use thiserror::Error;

use crate::frontend::sexp::{parse_sexps, Sexp};
use crate::frontend::{print_symbol, print_term, Env};
use crate::process::{self, ProcessError};
use crate::term::{
    partial_evaluate, substitute, Binding, FunDef, FunSig, FunctionTable, Sort, Symbol, SymbolKind, Term, Value,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    #[error("SMT solver failed: {0}")]
    Crash(String),
    #[error("SMT solver did not answer within {0:.1}s")]
    Timeout(f64),
    #[error("could not parse SMT solver model: {0}")]
    ModelParse(String),
    #[error("formula cannot be sent to the SMT solver: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackendConfig {
    pub program: String,
    pub args: Vec<String>,
    pub logic: String,
    pub timeout: Option<Duration>,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            program: "z3".into(),
            args: vec!["-in".into()],
            logic: "ALL".into(),
            timeout: None,
        }
    }
}

impl BackendConfig {
    /// Builds a configuration from a command line such as `"cvc5 --lang smt2"`.
    pub fn from_command_line(cmd: &str) -> Option<Self> {
        let mut words = cmd.split_whitespace().map(str::to_string);
        let program = words.next()?;
        Some(BackendConfig {
            program,
            args: words.collect(),
            ..Self::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown(String),
}

/// Uninterpreted symbols of a query, with their ranks.
pub type Declarations = BTreeMap<String, FunSig>;

/// Interpretations of the ordinary symbols reported by the solver.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Model {
    entries: BTreeMap<String, FunDef>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("model has no entry for {0}")]
    IncompleteModel(String),
    #[error("cannot evaluate {symbol}: {message}")]
    Eval { symbol: String, message: String },
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, def: FunDef) {
        self.entries.insert(def.name.clone(), def);
    }

    pub fn get(&self, name: &str) -> Option<&FunDef> {
        self.entries.get(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FunDef> {
        self.entries.values()
    }

    /// `M|names`: only the listed symbols.
    pub fn restrict<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Model {
        let keep: BTreeSet<&str> = names.into_iter().collect();
        Model {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Adds default interpretations (constant false, 0, zero vector, empty
    /// string) for declared symbols the solver did not report, and returns
    /// their names.
    pub fn complete(&mut self, decls: &Declarations) -> Vec<String> {
        let mut filled = Vec::new();
        for (name, sig) in decls {
            if sig.codomain.is_function() || self.entries.contains_key(name) {
                continue;
            }
            let params = sig.domain.iter().enumerate().map(|(i, s)| (format!("x{i}"), s.clone())).collect();
            self.insert(FunDef::new(name.clone(), params, Term::Value(sig.codomain.default_value())));
            filled.push(name.clone());
        }
        filled
    }

    pub fn function_table(&self) -> FunctionTable {
        self.entries.clone().into_iter().collect()
    }

    /// `f^M(args)`, fully evaluated.
    pub fn eval(&self, symbol: &str, args: &[Value]) -> Result<Value, ModelError> {
        let def = self
            .entries
            .get(symbol)
            .ok_or_else(|| ModelError::IncompleteModel(symbol.to_string()))?;
        let err = |message: String| ModelError::Eval {
            symbol: symbol.to_string(),
            message,
        };
        if def.params.len() != args.len() {
            return Err(err(format!("expects {} arguments, got {}", def.params.len(), args.len())));
        }
        let binding: Binding = def
            .params
            .iter()
            .zip(args)
            .map(|((x, _), v)| (x.clone(), Term::Value(v.clone())))
            .collect();
        let t = partial_evaluate(&substitute(&def.body, &binding).map_err(|e| err(e.to_string()))?)
            .map_err(|e| err(e.to_string()))?;
        t.as_value().cloned().ok_or_else(|| err(format!("body does not evaluate: {}", print_term(&t))))
    }
}

/// Evaluates `sym(args)` in `m`. A symbol the solver omitted evaluates to
/// the default value of its codomain; the flag reports when that happened.
pub fn eval_in_model(m: &Model, sym: &str, sig: &FunSig, args: &[Value]) -> Result<(Value, bool), ModelError> {
    match m.eval(sym, args) {
        Err(ModelError::IncompleteModel(_)) => Ok((sig.codomain.default_value(), true)),
        other => other.map(|v| (v, false)),
    }
}

struct Abstraction {
    sorts: BTreeSet<Sort>,
    lambdas: Vec<(Value, String)>,
}

impl Abstraction {
    fn sort_name(&mut self, s: &Sort) -> String {
        match s {
            Sort::Fn(..) => {
                self.sorts.insert(s.clone());
                print_symbol(&format!("{s}"))
            }
            _ => s.to_string(),
        }
    }

    /// Replaces function values by fresh constants of an uninterpreted
    /// sort. Structurally equal lambdas share a constant.
    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Value(v @ Value::Lambda(_)) => {
                let sort = v.sort();
                self.sorts.insert(sort.clone());
                let name = match self.lambdas.iter().find(|(w, _)| w == v) {
                    Some((_, n)) => n.clone(),
                    None => {
                        let n = format!("lambda!{}", self.lambdas.len());
                        self.lambdas.push((v.clone(), n.clone()));
                        n
                    }
                };
                Term::App(crate::term::App {
                    symbol: Symbol::ordinary(name),
                    args: Vec::new(),
                    sort,
                })
            }
            Term::Value(_) | Term::Var(..) => t.clone(),
            Term::App(app) => {
                let mut app = app.clone();
                app.args = app.args.iter().map(|a| self.term(a)).collect();
                Term::App(app)
            }
            Term::Let(bs, body) => Term::Let(
                bs.iter().map(|(x, e)| (x.clone(), self.term(e))).collect(),
                Box::new(self.term(body)),
            ),
            Term::Quant(q, vs, body) => Term::Quant(*q, vs.clone(), Box::new(self.term(body))),
        }
    }
}

/// The SMT-LIB benchmark sent for `formula`. Identical inputs give
/// byte-identical output.
pub fn emit_benchmark(logic: &str, decls: &Declarations, formula: &Term) -> Result<String, BackendError> {
    if let Some(v) = formula.free_vars().into_iter().next() {
        return Err(BackendError::Unsupported(format!("free variable {v}")));
    }
    if formula.sort() != Sort::Bool {
        return Err(BackendError::Unsupported("formula is not Bool".into()));
    }
    let mut abs = Abstraction {
        sorts: BTreeSet::new(),
        lambdas: Vec::new(),
    };
    let body = abs.term(formula);
    let mut decl_text = String::new();
    for (name, sig) in decls {
        let domain: Vec<String> = sig.domain.iter().map(|s| abs.sort_name(s)).collect();
        let codomain = abs.sort_name(&sig.codomain);
        let _ = writeln!(decl_text, "(declare-fun {} ({}) {codomain})", print_symbol(name), domain.join(" "));
    }
    let lambda_decls: Vec<(String, Sort)> = abs.lambdas.iter().map(|(v, n)| (n.clone(), v.sort())).collect();
    for (n, s) in &lambda_decls {
        let sort = abs.sort_name(s);
        let _ = writeln!(decl_text, "(declare-fun {} () {sort})", print_symbol(n));
    }
    let mut out = String::new();
    let _ = writeln!(out, "(set-option :produce-models true)");
    let _ = writeln!(out, "(set-logic {logic})");
    for s in &abs.sorts {
        let _ = writeln!(out, "(declare-sort {} 0)", print_symbol(&s.to_string()));
    }
    out.push_str(&decl_text);
    let _ = writeln!(out, "(assert {})", print_term(&body));
    let _ = writeln!(out, "(check-sat)");
    let _ = writeln!(out, "(get-model)");
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Sat`; covers the first-order
    /// declared symbols reported by the solver.
    pub model: Option<Model>,
}

/// Decides `formula` with the external solver.
pub fn check_sat(cfg: &BackendConfig, decls: &Declarations, formula: &Term) -> Result<CheckResult, BackendError> {
    let benchmark = emit_benchmark(&cfg.logic, decls, formula)?;
    let mut cmd = Command::new(&cfg.program);
    cmd.args(&cfg.args);
    let finished = process::run(cmd, Some(benchmark), cfg.timeout).map_err(|e| match e {
        ProcessError::Spawn(err) => BackendError::Crash(format!("cannot start {}: {err}", cfg.program)),
        ProcessError::Timeout(t) => BackendError::Timeout(t.as_secs_f64()),
    })?;
    let mut lines = finished.stdout.lines().map(str::trim).filter(|l| !l.is_empty());
    let first = lines.next().unwrap_or("");
    let verdict = match first {
        "sat" => Verdict::Sat,
        "unsat" => Verdict::Unsat,
        "unknown" => Verdict::Unknown("solver returned unknown".into()),
        _ => {
            let detail = if first.is_empty() {
                finished.stderr.trim().to_string()
            } else {
                first.to_string()
            };
            return Err(BackendError::Crash(format!("{} ({})", detail, finished.status)));
        }
    };
    let model = match verdict {
        Verdict::Sat => {
            let rest: String = finished.stdout.trim_start().strip_prefix("sat").unwrap_or("").to_string();
            Some(parse_model(&rest, decls)?)
        }
        _ => None,
    };
    Ok(CheckResult { verdict, model })
}

/// Parses the solver's `(get-model)` output, keeping entries for the
/// first-order symbols of `decls`. Auxiliary definitions introduced by the
/// solver are inlined.
pub fn parse_model(text: &str, decls: &Declarations) -> Result<Model, BackendError> {
    let sexps = parse_sexps(text).map_err(|e| BackendError::ModelParse(e.to_string()))?;
    let mut items: Vec<Sexp> = Vec::new();
    for s in sexps {
        let Some(list) = s.list() else { continue };
        let head = list.first();
        if head.is_some_and(|h| h.is_symbol("error")) {
            return Err(BackendError::ModelParse(print_sexp_error(list)));
        }
        if head.is_some_and(|h| h.is_symbol("define-fun")) {
            items.push(s.clone());
        } else {
            let skip = usize::from(head.is_some_and(|h| h.is_symbol("model")));
            items.extend(list[skip..].iter().cloned());
        }
    }
    let mut pending: Vec<Sexp> = items
        .into_iter()
        .filter(|s| s.list().and_then(|l| l.first()).is_some_and(|h| h.is_symbol("define-fun")))
        .collect();
    let mut env = Env::default();
    let mut model = Model::new();
    loop {
        let before = pending.len();
        let mut failed = Vec::new();
        let mut last_err = None;
        for s in pending {
            let name = s.list().and_then(|l| l.get(1)).and_then(Sexp::symbol).unwrap_or("").to_string();
            match crate::frontend::definitions(std::slice::from_ref(&s), &env) {
                Ok(mut defs) => {
                    let def = defs.pop().expect("one definition");
                    match decls.get(&name) {
                        Some(sig) => {
                            if def.sig() != *sig {
                                return Err(BackendError::ModelParse(format!(
                                    "{name} has rank {:?}, declared {:?}",
                                    def.sig(),
                                    sig
                                )));
                            }
                            model.insert(def);
                        }
                        None => {
                            env.macros.insert(name, def);
                        }
                    }
                }
                Err(e) => {
                    last_err = Some(format!("{name}: {e}"));
                    failed.push(s);
                }
            }
        }
        if failed.is_empty() {
            break;
        }
        if failed.len() == before {
            // Entries that mention abstracted sorts cannot be read back; they
            // only matter when they interpret a first-order symbol.
            for s in &failed {
                let name = s.list().and_then(|l| l.get(1)).and_then(Sexp::symbol).unwrap_or("");
                let first_order = decls.get(name).is_some_and(|sig| {
                    !sig.codomain.is_function() && sig.domain.iter().all(|d| !d.is_function())
                });
                if first_order {
                    return Err(BackendError::ModelParse(last_err.unwrap_or_default()));
                }
            }
            break;
        }
        pending = failed;
    }
    Ok(model)
}

fn print_sexp_error(list: &[Sexp]) -> String {
    match list.get(1).map(|s| &s.kind) {
        Some(crate::frontend::sexp::SexpKind::Str(m)) => m.clone(),
        _ => "solver reported an error".into(),
    }
}

/// Symbols of `t` that need declaring, with ranks taken from the terms.
pub fn collect_declarations(t: &Term, into: &mut Declarations) {
    t.visit_apps(&mut |app| {
        if app.symbol.kind != SymbolKind::Theory && !into.contains_key(&app.symbol.name) {
            let sig = if app.args.is_empty() {
                FunSig::constant(app.sort.clone())
            } else {
                FunSig::new(app.args.iter().map(Term::sort).collect(), app.sort.clone())
            };
            into.insert(app.symbol.name.clone(), sig);
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_is_deterministic_and_abstracts_functions() {
        let fsort = Sort::function(vec![Sort::Int], Sort::Int).unwrap();
        let lambda = Value::Lambda(crate::term::Lambda {
            params: vec![("x".into(), Sort::Int)],
            body: Box::new(Term::var("x", Sort::Int)),
        });
        let app = Term::oracle("corr", vec![Term::Value(lambda)], Sort::Bool);
        let mut decls = Declarations::new();
        decls.insert("corr".into(), FunSig::new(vec![fsort], Sort::Bool));
        let a = emit_benchmark("ALL", &decls, &Term::not(app.clone())).unwrap();
        let b = emit_benchmark("ALL", &decls, &Term::not(app)).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("(declare-sort |(-> Int Int)| 0)"));
        assert!(a.contains("(declare-fun corr (|(-> Int Int)|) Bool)"));
        assert!(a.contains("(assert (not (corr lambda!0)))"));
    }

    #[test]
    fn rejects_free_variables() {
        let t = Term::eq(Term::var("x", Sort::Int), Term::int(1)).unwrap();
        assert!(matches!(
            emit_benchmark("ALL", &Declarations::new(), &t),
            Err(BackendError::Unsupported(_))
        ));
    }

    #[test]
    fn model_parsing_with_auxiliary_definitions() {
        let mut decls = Declarations::new();
        decls.insert("c".into(), FunSig::constant(Sort::Int));
        decls.insert("f".into(), FunSig::new(vec![Sort::Int], Sort::Int));
        let text = "(\n (define-fun f ((x!0 Int)) Int (f!1 x!0))\n (define-fun c () Int (- 4))\n \
                    (define-fun f!1 ((x!0 Int)) Int (ite (= x!0 1) 2 0))\n)";
        let m = parse_model(text, &decls).unwrap();
        assert_eq!(m.eval("c", &[]).unwrap(), Value::int(-4));
        assert_eq!(m.eval("f", &[Value::int(1)]).unwrap(), Value::int(2));
        assert_eq!(m.eval("f", &[Value::int(5)]).unwrap(), Value::int(0));
    }

    #[test]
    fn eval_and_defaults() {
        let mut m = Model::new();
        let x = Term::var("x", Sort::Int);
        m.insert(FunDef::new("f", vec![("x".into(), Sort::Int)], Term::theory("+", vec![x, Term::int(1)]).unwrap()));
        m.insert(FunDef::new("c", vec![], Term::int(76)));
        assert_eq!(m.eval("f", &[Value::int(4)]).unwrap(), Value::int(5));
        assert_eq!(m.eval("c", &[]).unwrap(), Value::int(76));
        let (v, missing) = eval_in_model(&m, "b", &FunSig::constant(Sort::Bool), &[]).unwrap();
        assert_eq!((v, missing), (Value::Bool(false), true));
        let mut decls = Declarations::new();
        decls.insert("b".into(), FunSig::constant(Sort::Bool));
        assert_eq!(m.complete(&decls), vec!["b".to_string()]);
        assert_eq!(m.restrict(["c"]).len(), 1);
    }
}
