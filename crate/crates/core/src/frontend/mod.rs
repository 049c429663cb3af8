//! The input language: SMT-LIB and SyGuS-IF extended with oracle
//! declarations, and the concrete-syntax printer.
//!
//! Oracle commands:
//!
//! ```text
//! (declare-oracle-fun isPrime (Int) Bool "./isprime")
//! (declare-oracle-fun corr ((-> Int Int)) Bool)
//! (oracle-assumption "./corr" ((g (-> Int Int))) ((ok Bool) (cex Int)) (= (corr g) ok) (>= (f cex) cex))
//! (oracle-constraint "./io" ((x Int)) ((y Int)) (= (f x) y))
//! ```
//!
//! `declare-oracle-fun` with an executable both declares the oracle symbol
//! and binds it to a definitional interface. Without one, it only declares
//! the symbol, which must then be defined by exactly one `oracle-assumption`.

mod parser;
pub mod printer;
pub mod sexp;

use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use thiserror::Error;

pub use parser::{parse_sort, sorted_vars, Env};
pub use printer::{print_define_fun, print_lambda_as_define_fun, print_symbol, print_term, print_value};
use sexp::{parse_sexps, Sexp, SexpKind};

use crate::oracle::OracleInterface;
use crate::synth::grammar::{Grammar, Production};
use crate::synth::SynthTarget;
use crate::term::{FunDef, FunSig, Sort, Term, Value};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("{line}:{col}: parse error: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{line}:{col}: sort error: {message}")]
    Sort { line: usize, col: usize, message: String },
    #[error("oracle symbol {0} is defined by more than one oracle interface")]
    DuplicateOracleDefinition(String),
    #[error("oracle symbol {0} is not defined by any oracle interface")]
    MissingOracleDefinition(String),
    #[error("unknown logic {0}")]
    UnknownLogic(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("malformed value: {0}")]
    ValueSyntax(String),
    #[error("value has sort {found}, expected {expected}")]
    SortMismatch { expected: Sort, found: Sort },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Directive {
    CheckSat,
    CheckSynth,
}

/// A sort-checked input problem.
#[derive(Debug, Clone)]
pub struct Script {
    pub logic: Option<String>,
    /// Every symbol in scope at the end of the script.
    pub env: Env,
    /// Declared uninterpreted symbols (excluding synthesis targets).
    pub functions: IndexMap<String, FunSig>,
    pub targets: Vec<SynthTarget>,
    pub interfaces: Vec<OracleInterface>,
    /// `assert` bodies.
    pub assertions: Vec<Term>,
    /// `constraint` bodies.
    pub constraints: Vec<Term>,
    pub directive: Directive,
}

impl Script {
    /// Resolves relative oracle executables against `base`, normally the
    /// directory of the input file.
    pub fn resolve_executables(&mut self, base: &Path) {
        for i in &mut self.interfaces {
            if i.executable.is_relative() {
                i.executable = base.join(&i.executable);
            }
        }
    }
}

/// Recognises SMT-LIB logic names such as `QF_UFLIA`, `BV`, `SLIA` or `ALL`.
pub fn is_known_logic(name: &str) -> bool {
    if matches!(name, "ALL" | "QF_ALL") {
        return true;
    }
    let mut rest = name.strip_prefix("QF_").unwrap_or(name);
    rest = rest.strip_prefix("AX").unwrap_or(rest);
    rest = rest.strip_prefix("A").unwrap_or(rest);
    rest = rest.strip_prefix("UF").unwrap_or(rest);
    rest = rest.strip_prefix("DT").unwrap_or(rest);
    matches!(
        rest,
        "" | "BV" | "LIA" | "NIA" | "LRA" | "NRA" | "LIRA" | "NIRA" | "IDL" | "RDL" | "S" | "SLIA" | "SNIA" | "BVLIA"
    )
}

struct Builder {
    logic: Option<String>,
    env: Env,
    functions: IndexMap<String, FunSig>,
    targets: Vec<SynthTarget>,
    interfaces: Vec<OracleInterface>,
    assertions: Vec<Term>,
    constraints: Vec<Term>,
    directive: Option<Directive>,
}

fn symbol_arg<'a>(s: &'a Sexp, what: &str) -> Result<&'a str, FrontendError> {
    s.symbol().ok_or_else(|| s.error(format!("expected {what}")))
}

fn path_arg(s: &Sexp) -> Result<PathBuf, FrontendError> {
    match &s.kind {
        SexpKind::Str(p) | SexpKind::Symbol(p) => Ok(PathBuf::from(p)),
        _ => Err(s.error("expected an executable path")),
    }
}

fn arity(cmd: &Sexp, items: &[Sexp], min: usize, max: usize) -> Result<(), FrontendError> {
    let n = items.len() - 1;
    if n < min || n > max {
        let head = items[0].symbol().unwrap_or("command");
        return Err(cmd.error(format!("wrong number of arguments to {head}")));
    }
    Ok(())
}

impl Builder {
    fn fresh_name(&self, s: &Sexp, name: &str) -> Result<(), FrontendError> {
        if self.env.is_declared(name) {
            return Err(s.error(format!("symbol {name} is already declared")));
        }
        if crate::term::theory::is_theory_symbol(name) || matches!(name, "true" | "false") {
            return Err(s.error(format!("cannot redeclare built-in symbol {name}")));
        }
        Ok(())
    }

    fn bool_term(&self, s: &Sexp, locals: &mut Vec<(String, Sort)>) -> Result<Term, FrontendError> {
        let t = self.env.term(s, locals)?;
        if t.sort() != Sort::Bool {
            return Err(s.sort_error(format!("expected a Bool term, found {}", t.sort())));
        }
        Ok(t)
    }

    fn command(&mut self, cmd: &Sexp) -> Result<(), FrontendError> {
        let items = cmd.list().ok_or_else(|| cmd.error("expected a command"))?;
        let head = items
            .first()
            .and_then(Sexp::symbol)
            .ok_or_else(|| cmd.error("expected a command"))?;
        if self.directive.is_some() && !matches!(head, "get-model" | "exit" | "get-info" | "set-info") {
            return Err(cmd.error(format!("{head} after the final check command")));
        }
        match head {
            "set-logic" => {
                arity(cmd, items, 1, 1)?;
                let logic = symbol_arg(&items[1], "a logic name")?;
                if !is_known_logic(logic) {
                    return Err(FrontendError::UnknownLogic(logic.to_string()));
                }
                self.logic = Some(logic.to_string());
            }
            "set-option" | "set-info" | "get-info" | "get-model" | "exit" => {}
            "declare-const" => {
                arity(cmd, items, 2, 2)?;
                let name = symbol_arg(&items[1], "a symbol")?;
                self.fresh_name(&items[1], name)?;
                let sig = FunSig::constant(parse_sort(&items[2])?);
                self.env.ordinary.insert(name.into(), sig.clone());
                self.functions.insert(name.into(), sig);
            }
            "declare-fun" => {
                arity(cmd, items, 3, 3)?;
                let name = symbol_arg(&items[1], "a symbol")?;
                self.fresh_name(&items[1], name)?;
                let sig = signature(&items[2], &items[3])?;
                self.env.ordinary.insert(name.into(), sig.clone());
                self.functions.insert(name.into(), sig);
            }
            "define-fun" => {
                arity(cmd, items, 4, 4)?;
                let def = self.define_fun(items)?;
                self.env.macros.insert(def.name.clone(), def);
            }
            "declare-oracle-fun" => {
                arity(cmd, items, 3, 4)?;
                let name = symbol_arg(&items[1], "an oracle symbol")?;
                self.fresh_name(&items[1], name)?;
                let sig = signature(&items[2], &items[3])?;
                self.env.oracles.insert(name.into(), sig.clone());
                if let Some(path) = items.get(4) {
                    let query: Vec<(String, Sort)> =
                        sig.domain.iter().enumerate().map(|(i, s)| (format!("y{i}"), s.clone())).collect();
                    let response = vec![("z".to_string(), sig.codomain.clone())];
                    let app = Term::oracle(
                        name,
                        query.iter().map(|(y, s)| Term::var(y, s.clone())).collect(),
                        sig.codomain.clone(),
                    );
                    let alpha = Term::eq(app, Term::var("z", sig.codomain.clone())).expect("same sort");
                    let iface = OracleInterface::new(name, query, response, Some(alpha), None, path_arg(path)?)
                        .map_err(|m| cmd.error(m))?;
                    self.interfaces.push(iface);
                }
            }
            "oracle-constraint" | "oracle-assumption" => self.oracle_interface(cmd, head, items)?,
            "declare-var" => {
                arity(cmd, items, 2, 2)?;
                let name = symbol_arg(&items[1], "a variable")?;
                self.fresh_name(&items[1], name)?;
                let sort = parse_sort(&items[2])?;
                if sort.is_function() {
                    return Err(items[2].sort_error("variables must have first-order sorts"));
                }
                self.env.variables.insert(name.into(), sort);
            }
            "synth-fun" => self.synth_fun(cmd, items)?,
            "assert" => {
                arity(cmd, items, 1, 1)?;
                let t = self.bool_term(&items[1], &mut Vec::new())?;
                self.assertions.push(t);
            }
            "constraint" => {
                arity(cmd, items, 1, 1)?;
                let t = self.bool_term(&items[1], &mut Vec::new())?;
                self.constraints.push(t);
            }
            "check-sat" => {
                arity(cmd, items, 0, 0)?;
                self.directive = Some(Directive::CheckSat);
            }
            "check-synth" => {
                arity(cmd, items, 0, 0)?;
                self.directive = Some(Directive::CheckSynth);
            }
            other => return Err(FrontendError::Unsupported(format!("command {other}"))),
        }
        Ok(())
    }

    fn define_fun(&self, items: &[Sexp]) -> Result<FunDef, FrontendError> {
        let name = symbol_arg(&items[1], "a symbol")?;
        self.fresh_name(&items[1], name)?;
        let mut params = sorted_vars(&items[2])?;
        let codomain = parse_sort(&items[3])?;
        let body = self.env.term(&items[4], &mut params)?;
        if body.sort() != codomain {
            return Err(items[4].sort_error(format!("body has sort {}, expected {codomain}", body.sort())));
        }
        Ok(FunDef::new(name, params, body))
    }

    fn oracle_interface(&mut self, cmd: &Sexp, head: &str, items: &[Sexp]) -> Result<(), FrontendError> {
        let assumption = head == "oracle-assumption";
        if assumption {
            arity(cmd, items, 4, 5)?;
        } else {
            arity(cmd, items, 4, 4)?;
        }
        let executable = path_arg(&items[1])?;
        let query = sorted_vars(&items[2])?;
        let response = sorted_vars(&items[3])?;
        if let Some((x, _)) = query.iter().find(|(x, _)| response.iter().any(|(z, _)| z == x)) {
            return Err(items[3].error(format!("{x} is both a query and a response variable")));
        }
        let mut locals: Vec<(String, Sort)> = query.iter().chain(&response).cloned().collect();
        let first = self.bool_term(&items[4], &mut locals)?;
        let (alpha, beta) = if assumption {
            let beta = items.get(5).map(|b| self.bool_term(b, &mut locals)).transpose()?;
            (Some(first), beta)
        } else {
            (None, Some(first))
        };
        let name = format!("{}#{}", executable.display(), self.interfaces.len());
        let iface = OracleInterface::new(name, query, response, alpha, beta, executable).map_err(|m| cmd.error(m))?;
        if assumption && iface.defined_symbol().is_none() {
            return Err(FrontendError::Unsupported(
                "oracle assumptions must have the form (= (theta y1 ... yn) z); \
                 general satisfiability modulo oracles is outside the definitional fragment"
                    .into(),
            ));
        }
        self.interfaces.push(iface);
        Ok(())
    }

    fn synth_fun(&mut self, cmd: &Sexp, items: &[Sexp]) -> Result<(), FrontendError> {
        arity(cmd, items, 3, 5)?;
        let name = symbol_arg(&items[1], "a function name")?;
        self.fresh_name(&items[1], name)?;
        let params = sorted_vars(&items[2])?;
        let codomain = parse_sort(&items[3])?;
        if codomain.is_function() || params.iter().any(|(_, s)| s.is_function()) {
            return Err(items[3].sort_error("synthesis targets must be first-order"));
        }
        let grammar = match &items[4..] {
            [] => None,
            [rules] => Some(self.grammar(rules, None, &params)?),
            [decls, rules] => Some(self.grammar(rules, Some(decls), &params)?),
            _ => unreachable!("arity checked"),
        };
        if let Some(g) = &grammar {
            if *g.start_sort() != codomain {
                return Err(items[4].sort_error(format!(
                    "grammar start symbol has sort {}, expected {codomain}",
                    g.start_sort()
                )));
            }
        }
        let target = SynthTarget {
            name: name.to_string(),
            params,
            codomain,
            grammar,
        };
        self.env.ordinary.insert(name.into(), target.sig());
        self.targets.push(target);
        Ok(())
    }

    /// Grammar in either the SyGuS v2 form (declarations then rules) or
    /// the v1 form (rules only, each carrying its sort).
    fn grammar(
        &self,
        rules: &Sexp,
        decls: Option<&Sexp>,
        params: &[(String, Sort)],
    ) -> Result<Grammar, FrontendError> {
        let rule_items = rules.list().ok_or_else(|| rules.error("expected grammar rules"))?;
        let nonterminals: Vec<(String, Sort)> = match decls {
            Some(d) => sorted_vars(d)?,
            None => rule_items
                .iter()
                .map(|r| match r.list() {
                    Some([n, s, _]) => Ok((symbol_arg(n, "a non-terminal")?.to_string(), parse_sort(s)?)),
                    _ => Err(r.error("expected (NonTerminal Sort (productions))")),
                })
                .collect::<Result<_, _>>()?,
        };
        if nonterminals.is_empty() {
            return Err(rules.error("grammar has no non-terminals"));
        }
        let mut locals: Vec<(String, Sort)> = params.iter().chain(&nonterminals).cloned().collect();
        let mut all_rules = vec![Vec::new(); nonterminals.len()];
        for r in rule_items {
            let Some([n, s, prods]) = r.list() else {
                return Err(r.error("expected (NonTerminal Sort (productions))"));
            };
            let n = symbol_arg(n, "a non-terminal")?;
            let idx = nonterminals
                .iter()
                .position(|(m, _)| m == n)
                .ok_or_else(|| r.error(format!("undeclared non-terminal {n}")))?;
            let sort = parse_sort(s)?;
            if sort != nonterminals[idx].1 {
                return Err(s.sort_error(format!("non-terminal {n} declared with sort {}", nonterminals[idx].1)));
            }
            let prods = prods.list().ok_or_else(|| r.error("expected a production list"))?;
            for p in prods {
                let special = p.list().and_then(|l| match l {
                    [h, s] if h.is_symbol("Constant") => Some((true, s)),
                    [h, s] if h.is_symbol("Variable") => Some((false, s)),
                    _ => None,
                });
                let prod = match special {
                    Some((true, s)) => Production::AnyConstant(parse_sort(s)?),
                    Some((false, s)) => Production::AnyVariable(parse_sort(s)?),
                    None => Production::Term(self.env.term(p, &mut locals)?),
                };
                all_rules[idx].push(prod);
            }
        }
        Grammar::new(nonterminals, all_rules, params).map_err(|m| rules.sort_error(m))
    }

    fn finish(self, end: (usize, usize)) -> Result<Script, FrontendError> {
        let directive = self.directive.ok_or(FrontendError::Parse {
            line: end.0,
            col: end.1,
            message: "missing final (check-sat) or (check-synth)".into(),
        })?;
        match directive {
            Directive::CheckSat => {
                if !self.targets.is_empty() || !self.constraints.is_empty() {
                    return Err(FrontendError::Unsupported(
                        "check-sat cannot be combined with synth-fun or constraint".into(),
                    ));
                }
                if let Some(i) = self.interfaces.iter().find(|i| i.defined_symbol().is_none()) {
                    return Err(FrontendError::Unsupported(format!(
                        "constraint-only oracle interface {} requires check-synth",
                        i.name
                    )));
                }
                if self.interfaces.iter().any(|i| i.constraint.is_some()) {
                    return Err(FrontendError::Unsupported(
                        "constraint generators are only used in synthesis problems".into(),
                    ));
                }
            }
            Directive::CheckSynth => {
                if !self.assertions.is_empty() {
                    return Err(FrontendError::Unsupported(
                        "check-synth cannot be combined with assert".into(),
                    ));
                }
                if self.targets.is_empty() {
                    return Err(FrontendError::Unsupported("check-synth without synth-fun".into()));
                }
                if !self.functions.is_empty() {
                    return Err(FrontendError::Unsupported(
                        "uninterpreted functions in synthesis problems".into(),
                    ));
                }
            }
        }
        let mut referenced = std::collections::BTreeSet::new();
        let formulas = self.assertions.iter().chain(&self.constraints);
        let generators = self
            .interfaces
            .iter()
            .flat_map(|i| i.assumption.iter().chain(i.constraint.iter()));
        for t in formulas.chain(generators) {
            referenced.extend(t.symbols(crate::term::SymbolKind::Oracle));
        }
        for theta in self.env.oracles.keys() {
            let defining = self
                .interfaces
                .iter()
                .filter(|i| i.defined_symbol() == Some(theta.as_str()))
                .count();
            if defining > 1 {
                return Err(FrontendError::DuplicateOracleDefinition(theta.clone()));
            }
            if defining == 0 && referenced.contains(theta) {
                return Err(FrontendError::MissingOracleDefinition(theta.clone()));
            }
        }
        Ok(Script {
            logic: self.logic,
            env: self.env,
            functions: self.functions,
            targets: self.targets,
            interfaces: self.interfaces,
            assertions: self.assertions,
            constraints: self.constraints,
            directive,
        })
    }
}

fn signature(domain: &Sexp, codomain: &Sexp) -> Result<FunSig, FrontendError> {
    let domain = domain
        .list()
        .ok_or_else(|| domain.error("expected a list of argument sorts"))?
        .iter()
        .map(parse_sort)
        .collect::<Result<Vec<_>, _>>()?;
    let codomain = parse_sort(codomain)?;
    if codomain.is_function() {
        return Err(FrontendError::Unsupported("function-valued symbols".into()));
    }
    Ok(FunSig::new(domain, codomain))
}

/// Parses and sort-checks a complete problem file.
pub fn parse_script(text: &str) -> Result<Script, FrontendError> {
    let commands = parse_sexps(text)?;
    let mut b = Builder {
        logic: None,
        env: Env::default(),
        functions: IndexMap::new(),
        targets: Vec::new(),
        interfaces: Vec::new(),
        assertions: Vec::new(),
        constraints: Vec::new(),
        directive: None,
    };
    for c in &commands {
        b.command(c)?;
    }
    let lines = text.lines().count().max(1);
    let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    b.finish((lines, last_col))
}

/// Parses one SMT-LIB value literal of the expected sort. Function sorts
/// accept `(lambda ...)` or a `(define-fun ...)`.
pub fn parse_value(text: &str, expected: &Sort) -> Result<Value, FrontendError> {
    let sexps = parse_sexps(text).map_err(|e| FrontendError::ValueSyntax(e.to_string()))?;
    let [s] = sexps.as_slice() else {
        return Err(FrontendError::ValueSyntax(format!("expected exactly one value in {text:?}")));
    };
    value_from_sexp(s, expected, &Env::default())
}

pub(crate) fn value_from_sexp(s: &Sexp, expected: &Sort, env: &Env) -> Result<Value, FrontendError> {
    if let Some(items) = s.list() {
        if items.first().is_some_and(|h| h.is_symbol("define-fun")) {
            let defs = definitions(std::slice::from_ref(s), env)?;
            let v = defs[0]
                .to_value()
                .ok_or_else(|| FrontendError::ValueSyntax("constant definition used as a function".into()))?;
            return check_value_sort(v, expected);
        }
    }
    let t = env.term(s, &mut Vec::new()).map_err(|e| FrontendError::ValueSyntax(e.to_string()))?;
    parser::term_to_value(&t, expected)
}

fn check_value_sort(v: Value, expected: &Sort) -> Result<Value, FrontendError> {
    let found = v.sort();
    if &found != expected {
        return Err(FrontendError::SortMismatch {
            expected: expected.clone(),
            found,
        });
    }
    Ok(v)
}

pub(crate) fn definitions(sexps: &[Sexp], env: &Env) -> Result<Vec<FunDef>, FrontendError> {
    let mut out = Vec::new();
    for s in sexps {
        let items = s.list().unwrap_or_default();
        if !items.first().is_some_and(|h| h.is_symbol("define-fun")) || items.len() != 5 {
            return Err(s.error("expected (define-fun name ((x S) ...) S body)"));
        }
        let name = symbol_arg(&items[1], "a function name")?;
        let mut params = sorted_vars(&items[2])?;
        let codomain = parse_sort(&items[3])?;
        let body = env.term(&items[4], &mut params)?;
        if body.sort() != codomain {
            return Err(items[4].sort_error(format!("body has sort {}, expected {codomain}", body.sort())));
        }
        out.push(FunDef::new(name, params, body));
    }
    Ok(out)
}

/// Parses a sequence of `define-fun` commands, as printed by synthesis
/// solvers or as a solver model. An optional enclosing list (the `(model
/// ...)` wrapper or a bare parenthesised list) is accepted. Symbols in `env`
/// may occur in bodies.
pub fn parse_definitions(text: &str, env: &Env) -> Result<Vec<FunDef>, FrontendError> {
    let mut sexps = parse_sexps(text)?;
    if let [single] = sexps.as_slice() {
        if let Some(items) = single.list() {
            let is_wrapper = items.first().map_or(true, |h| h.is_symbol("model") || h.list().is_some());
            if is_wrapper {
                let skip = usize::from(items.first().is_some_and(|h| h.is_symbol("model")));
                sexps = items[skip..].to_vec();
            }
        }
    }
    definitions(&sexps, env)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PRIME76: &str = r#"
        (set-logic ALL)
        (declare-oracle-fun isPrime (Int) Bool "./isprime")
        (declare-fun f1 () Int)
        (declare-fun f2 () Int)
        (declare-fun f3 () Int)
        (assert (= (* f1 f2 f3) 76))
        (assert (and (isPrime f1) (isPrime f2) (isPrime f3)))
        (check-sat)
    "#;

    #[test]
    fn prime_script_shape() {
        let s = parse_script(PRIME76).unwrap();
        assert_eq!(s.env.oracles.len(), 1);
        assert_eq!(s.assertions.len(), 2);
        assert_eq!(s.interfaces.len(), 1);
        assert_eq!(s.interfaces[0].defined_symbol(), Some("isPrime"));
        assert_eq!(s.directive, Directive::CheckSat);
    }

    #[test]
    fn empty_input_has_no_directive() {
        assert!(matches!(parse_script(""), Err(FrontendError::Parse { .. })));
    }

    #[test]
    fn io_constraint_interface() {
        let s = parse_script(
            r#"(set-logic LIA)
               (synth-fun f ((x Int)) Int)
               (oracle-constraint "./io" ((x Int)) ((y Int)) (= (f x) y))
               (check-synth)"#,
        )
        .unwrap();
        let i = &s.interfaces[0];
        assert!(i.defined_symbol().is_none());
        assert_eq!(print_term(i.constraint.as_ref().unwrap()), "(= (f x) y)");
    }

    #[test]
    fn duplicate_and_missing_definitions() {
        let dup = r#"(declare-oracle-fun t (Int) Bool "./a")
            (oracle-assumption "./b" ((y Int)) ((z Bool)) (= (t y) z))
            (declare-const c Int) (assert (t c)) (check-sat)"#;
        assert_eq!(
            parse_script(dup).unwrap_err(),
            FrontendError::DuplicateOracleDefinition("t".into())
        );
        let missing = "(declare-oracle-fun t (Int) Bool) (declare-const c Int) (assert (t c)) (check-sat)";
        assert_eq!(
            parse_script(missing).unwrap_err(),
            FrontendError::MissingOracleDefinition("t".into())
        );
    }

    #[test]
    fn free_assumption_is_rejected() {
        let text = r#"(declare-oracle-fun t (Int) Bool)
            (oracle-assumption "./b" ((y Int)) ((z Bool)) (or (t y) z))
            (declare-const c Int) (assert (t c)) (check-sat)"#;
        assert!(matches!(parse_script(text), Err(FrontendError::Unsupported(_))));
    }

    #[test]
    fn mixed_directives_rejected() {
        let text = "(synth-fun f ((x Int)) Int) (check-sat)";
        assert!(matches!(parse_script(text), Err(FrontendError::Unsupported(_))));
    }

    #[test]
    fn unknown_logic() {
        assert_eq!(
            parse_script("(set-logic FOO) (check-sat)").unwrap_err(),
            FrontendError::UnknownLogic("FOO".into())
        );
        assert!(is_known_logic("QF_UFLIA"));
        assert!(is_known_logic("QF_BV"));
        assert!(is_known_logic("SLIA"));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_script("(declare-const x Int)\n(assert (+ x 1))\n(check-sat)").unwrap_err();
        assert!(matches!(err, FrontendError::Sort { line: 2, .. }), "{err:?}");
        let err = parse_script("(assert (= y 1))").unwrap_err();
        assert!(matches!(err, FrontendError::Parse { line: 1, col: 12, .. }), "{err:?}");
    }

    #[test]
    fn grammars_in_both_dialects() {
        let v2 = r#"(synth-fun f ((x Int)) Int ((S Int)) ((S Int (x 1 (+ S S)))))
                    (constraint (= (f 1) 2)) (check-synth)"#;
        let v1 = r#"(synth-fun f ((x Int)) Int ((S Int (x 1 (+ S S) (Constant Int)))))
                    (constraint (= (f 1) 2)) (check-synth)"#;
        let g2 = parse_script(v2).unwrap().targets[0].grammar.clone().unwrap();
        let g1 = parse_script(v1).unwrap().targets[0].grammar.clone().unwrap();
        assert_eq!(g2.rules[0].len(), 3);
        assert_eq!(g1.rules[0].len(), 4);
        assert_eq!(g1.rules[0][3], Production::AnyConstant(Sort::Int));
    }

    #[test]
    fn grammar_start_sort_must_match() {
        let text = "(synth-fun f ((x Int)) Bool ((S Int)) ((S Int (x)))) (check-synth)";
        assert!(matches!(parse_script(text), Err(FrontendError::Sort { .. })));
    }

    #[test]
    fn values() {
        assert_eq!(parse_value("true", &Sort::Bool).unwrap(), Value::Bool(true));
        assert_eq!(parse_value("(- 5)", &Sort::Int).unwrap(), Value::int(-5));
        assert_eq!(
            parse_value("#b1010", &Sort::BitVec(4)).unwrap(),
            Value::BitVec(crate::term::BitVecValue::from_u64(4, 10))
        );
        assert_eq!(
            parse_value("(_ bv5 8)", &Sort::BitVec(8)).unwrap(),
            Value::BitVec(crate::term::BitVecValue::from_u64(8, 5))
        );
        assert!(matches!(
            parse_value("#b1010", &Sort::Int),
            Err(FrontendError::SortMismatch { .. })
        ));
        assert!(matches!(parse_value("(+ 1", &Sort::Int), Err(FrontendError::ValueSyntax(_))));
        let f = Sort::function(vec![Sort::Int], Sort::Int).unwrap();
        let v = parse_value("(define-fun g ((x Int)) Int (+ x 1))", &f).unwrap();
        assert_eq!(print_value(&v), "(lambda ((x Int)) (+ x 1))");
    }

    #[test]
    fn model_definitions() {
        let text = "(\n  (define-fun c () Int 76)\n  (define-fun f ((x!0 Int)) Int (ite (= x!0 1) 2 0))\n)";
        let defs = parse_definitions(text, &Env::default()).unwrap();
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].body, Term::int(76));
        let defs = parse_definitions("(model (define-fun c () Bool false))", &Env::default()).unwrap();
        assert_eq!(defs[0].codomain, Sort::Bool);
    }

    #[test]
    fn chainable_and_let() {
        let env = {
            let mut e = Env::default();
            e.variables.insert("x".into(), Sort::Int);
            e
        };
        let t = env.parse_term("(< 0 x 5)").unwrap();
        assert_eq!(print_term(&t), "(and (< 0 x) (< x 5))");
        let t = env.parse_term("(let ((y (+ x 1))) (* y y))").unwrap();
        assert_eq!(t.sort(), Sort::Int);
    }
}
