//! Sorts and terms from s-expressions.

use indexmap::IndexMap;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Num;

use super::sexp::{Sexp, SexpKind};
use super::FrontendError;
use crate::term::{
    theory, App, BitVecValue, FunDef, FunSig, Lambda, Quantifier, Sort, Symbol, SymbolKind, Term, Value,
};

type Result<T> = std::result::Result<T, FrontendError>;

/// Symbols visible while parsing terms.
#[derive(Debug, Clone, Default)]
pub struct Env {
    /// Uninterpreted (ordinary) function symbols, including synthesis targets.
    pub ordinary: IndexMap<String, FunSig>,
    /// Oracle function symbols.
    pub oracles: IndexMap<String, FunSig>,
    /// `define-fun` macros, inlined at parse time.
    pub macros: IndexMap<String, FunDef>,
    /// Universally quantified SyGuS variables.
    pub variables: IndexMap<String, Sort>,
}

impl Env {
    pub fn is_declared(&self, name: &str) -> bool {
        self.ordinary.contains_key(name)
            || self.oracles.contains_key(name)
            || self.macros.contains_key(name)
            || self.variables.contains_key(name)
    }

    /// Parses a single term from text.
    pub fn parse_term(&self, text: &str) -> Result<Term> {
        let sexps = super::sexp::parse_sexps(text)?;
        match sexps.as_slice() {
            [one] => self.term(one, &mut Vec::new()),
            [] => Err(FrontendError::Parse {
                line: 1,
                col: 1,
                message: "expected a term".into(),
            }),
            [_, second, ..] => Err(second.error("trailing input after term")),
        }
    }

    /// Parses a term with `locals` in scope (innermost last).
    pub fn term(&self, s: &Sexp, locals: &mut Vec<(String, Sort)>) -> Result<Term> {
        match &s.kind {
            SexpKind::Numeral(n) => Ok(Term::Value(Value::Int(n.parse::<BigInt>().expect("numeral")))),
            SexpKind::Decimal(d) => Ok(Term::Value(Value::Real(parse_decimal(d)))),
            SexpKind::Binary(b) => Ok(Term::Value(Value::BitVec(BitVecValue::new(
                b.len() as u32,
                BigUint::from_str_radix(b, 2).expect("binary digits"),
            )))),
            SexpKind::Hex(h) => Ok(Term::Value(Value::BitVec(BitVecValue::new(
                4 * h.len() as u32,
                BigUint::from_str_radix(h, 16).expect("hex digits"),
            )))),
            SexpKind::Str(text) => Ok(Term::Value(Value::String(text.clone()))),
            SexpKind::Keyword(k) => Err(s.error(format!("unexpected keyword :{k}"))),
            SexpKind::Symbol(name) => self.atom(s, name, locals),
            SexpKind::List(items) => self.list(s, items, locals),
        }
    }

    fn atom(&self, s: &Sexp, name: &str, locals: &[(String, Sort)]) -> Result<Term> {
        if let Some((_, sort)) = locals.iter().rev().find(|(x, _)| x == name) {
            return Ok(Term::var(name, sort.clone()));
        }
        match name {
            "true" => return Ok(Term::bool(true)),
            "false" => return Ok(Term::bool(false)),
            _ => {}
        }
        if let Some(sort) = self.variables.get(name) {
            return Ok(Term::var(name, sort.clone()));
        }
        self.apply_symbol(s, name, Vec::new())
    }

    /// Applies a declared (non-theory) symbol, checking the rank. A bare
    /// function symbol of positive arity denotes the function itself.
    fn apply_symbol(&self, s: &Sexp, name: &str, args: Vec<Term>) -> Result<Term> {
        let (sig, kind) = if let Some(sig) = self.ordinary.get(name) {
            (sig, SymbolKind::Ordinary)
        } else if let Some(sig) = self.oracles.get(name) {
            (sig, SymbolKind::Oracle)
        } else if let Some(def) = self.macros.get(name) {
            return self.expand_macro(s, def, args);
        } else {
            return Err(s.error(format!("unknown symbol {name}")));
        };
        let sort = if args.is_empty() && !sig.domain.is_empty() {
            sig.as_sort()
        } else {
            self.check_args(s, name, &sig.domain, &args)?;
            sig.codomain.clone()
        };
        Ok(Term::App(App {
            symbol: Symbol {
                name: name.to_string(),
                indices: Vec::new(),
                kind,
            },
            args,
            sort,
        }))
    }

    fn check_args(&self, s: &Sexp, name: &str, domain: &[Sort], args: &[Term]) -> Result<()> {
        if domain.len() != args.len() {
            return Err(s.sort_error(format!(
                "{name} expects {} arguments, got {}",
                domain.len(),
                args.len()
            )));
        }
        for (i, (d, a)) in domain.iter().zip(args).enumerate() {
            let found = a.sort();
            if *d != found {
                return Err(s.sort_error(format!("argument {} of {name} has sort {found}, expected {d}", i + 1)));
            }
        }
        Ok(())
    }

    fn expand_macro(&self, s: &Sexp, def: &FunDef, args: Vec<Term>) -> Result<Term> {
        if args.is_empty() && !def.params.is_empty() {
            return def
                .to_value()
                .map(Term::Value)
                .ok_or_else(|| s.sort_error(format!("{} cannot be used as a value", def.name)));
        }
        let domain: Vec<Sort> = def.params.iter().map(|(_, s)| s.clone()).collect();
        self.check_args(s, &def.name, &domain, &args)?;
        let binding = def.params.iter().map(|(x, _)| x.clone()).zip(args).collect();
        crate::term::substitute(&def.body, &binding).map_err(|e| s.sort_error(e.to_string()))
    }

    fn list(&self, s: &Sexp, items: &[Sexp], locals: &mut Vec<(String, Sort)>) -> Result<Term> {
        let Some(head) = items.first() else {
            return Err(s.error("empty application"));
        };
        if let Some(parts) = head.list() {
            // ((_ extract i j) t) and friends
            if parts.first().is_some_and(|p| p.is_symbol("_")) {
                let (name, indices) = indexed_head(head, parts)?;
                let args = self.terms(&items[1..], locals)?;
                return self.theory_app(s, &name, indices, args);
            }
            return Err(head.error("application head must be a symbol"));
        }
        let name = head.symbol().ok_or_else(|| head.error("application head must be a symbol"))?;
        match name {
            "_" => return self.indexed_literal(s, items),
            "let" => return self.let_term(s, items, locals),
            "forall" | "exists" => return self.quantifier(s, name, items, locals),
            "lambda" => return self.lambda(s, items, locals),
            "!" => {
                return match items.get(1) {
                    Some(t) => self.term(t, locals),
                    None => Err(s.error("annotation without a term")),
                }
            }
            "-" if items.len() == 2 => {
                // negative literals
                match &items[1].kind {
                    SexpKind::Numeral(n) => {
                        return Ok(Term::Value(Value::Int(-n.parse::<BigInt>().expect("numeral"))))
                    }
                    SexpKind::Decimal(d) => return Ok(Term::Value(Value::Real(-parse_decimal(d)))),
                    SexpKind::List(inner) => {
                        if let Some(r) = rational_literal(inner) {
                            return Ok(Term::Value(Value::Real(-r)));
                        }
                    }
                    _ => {}
                }
            }
            "/" => {
                if let Some(r) = rational_literal(items) {
                    return Ok(Term::Value(Value::Real(r)));
                }
            }
            _ => {}
        }
        let args = self.terms(&items[1..], locals)?;
        if theory::is_theory_symbol(name) && !self.is_declared(name) {
            return self.theory_app(s, name, Vec::new(), args);
        }
        if locals.iter().any(|(x, _)| x == name) && !self.is_declared(name) {
            return Err(s.error(format!("variable {name} cannot be applied")));
        }
        self.apply_symbol(s, name, args)
    }

    fn terms(&self, items: &[Sexp], locals: &mut Vec<(String, Sort)>) -> Result<Vec<Term>> {
        items.iter().map(|i| self.term(i, locals)).collect()
    }

    fn theory_app(&self, s: &Sexp, name: &str, indices: Vec<u32>, mut args: Vec<Term>) -> Result<Term> {
        coerce_int_literals(name, &mut args);
        if theory::is_chainable(name) && args.len() > 2 {
            let links = args
                .windows(2)
                .map(|w| Term::theory(name, w.to_vec()))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| s.sort_error(e.to_string()))?;
            return Ok(Term::and(links));
        }
        Term::indexed(name, indices, args).map_err(|e| s.sort_error(e.to_string()))
    }

    fn indexed_literal(&self, s: &Sexp, items: &[Sexp]) -> Result<Term> {
        let (name, indices) = indexed_head(s, items)?;
        if let Some(digits) = name.strip_prefix("bv") {
            if let (Ok(n), [w]) = (digits.parse::<BigUint>(), indices.as_slice()) {
                if *w == 0 {
                    return Err(s.sort_error("bit-vector width must be positive"));
                }
                return Ok(Term::Value(Value::BitVec(BitVecValue::new(*w, n))));
            }
        }
        Err(s.error(format!("unknown indexed constant {name}")))
    }

    fn let_term(&self, s: &Sexp, items: &[Sexp], locals: &mut Vec<(String, Sort)>) -> Result<Term> {
        let [_, bindings, body] = items else {
            return Err(s.error("let expects bindings and a body"));
        };
        let bindings = bindings.list().ok_or_else(|| bindings.error("expected binding list"))?;
        let mut bound = Vec::new();
        for b in bindings {
            match b.list() {
                Some([x, t]) => {
                    let x = x.symbol().ok_or_else(|| x.error("expected a variable name"))?;
                    bound.push((x.to_string(), self.term(t, locals)?));
                }
                _ => return Err(b.error("expected (name term)")),
            }
        }
        let depth = locals.len();
        locals.extend(bound.iter().map(|(x, t)| (x.clone(), t.sort())));
        let body = self.term(body, locals);
        locals.truncate(depth);
        Ok(Term::Let(bound, Box::new(body?)))
    }

    fn quantifier(&self, s: &Sexp, name: &str, items: &[Sexp], locals: &mut Vec<(String, Sort)>) -> Result<Term> {
        let [_, vars, body] = items else {
            return Err(s.error(format!("{name} expects variables and a body")));
        };
        let vars = sorted_vars(vars)?;
        let depth = locals.len();
        locals.extend(vars.iter().cloned());
        let body = self.term(body, locals);
        locals.truncate(depth);
        let body = body?;
        if body.sort() != Sort::Bool {
            return Err(s.sort_error("quantifier body must be Bool"));
        }
        let q = if name == "forall" {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        Ok(Term::Quant(q, vars, Box::new(body)))
    }

    fn lambda(&self, s: &Sexp, items: &[Sexp], locals: &mut Vec<(String, Sort)>) -> Result<Term> {
        let [_, params, body] = items else {
            return Err(s.error("lambda expects parameters and a body"));
        };
        let params = sorted_vars(params)?;
        if params.is_empty() {
            return Err(s.sort_error("lambda needs at least one parameter"));
        }
        let depth = locals.len();
        locals.extend(params.iter().cloned());
        let body = self.term(body, locals);
        locals.truncate(depth);
        let lambda = Lambda {
            params,
            body: Box::new(body?),
        };
        let free = lambda.body.free_vars();
        if free.iter().any(|v| !lambda.params.iter().any(|(p, _)| p == v)) {
            return Err(s.sort_error("lambda body has free variables"));
        }
        Ok(Term::Value(Value::Lambda(lambda)))
    }
}

/// SMT-LIB is strict about `Int` vs `Real`, but hand-written inputs and some
/// solvers' models write integer literals where reals are expected.
fn coerce_int_literals(name: &str, args: &mut [Term]) {
    const MIXED: &[&str] = &["+", "-", "*", "/", "<=", "<", ">=", ">", "=", "distinct", "ite"];
    if !MIXED.contains(&name) {
        return;
    }
    let real_expected = name == "/" || args.iter().any(|a| a.sort() == Sort::Real);
    if !real_expected {
        return;
    }
    for a in args.iter_mut() {
        if let Term::Value(Value::Int(i)) = a {
            *a = Term::Value(Value::Real(BigRational::from_integer(i.clone())));
        }
    }
}

/// `(/ n d)` with literal operands and a non-zero denominator.
fn rational_literal(items: &[Sexp]) -> Option<BigRational> {
    let [head, n, d] = items else { return None };
    if !head.is_symbol("/") {
        return None;
    }
    let lit = |s: &Sexp| match &s.kind {
        SexpKind::Numeral(n) => Some(BigRational::from_integer(n.parse().ok()?)),
        SexpKind::Decimal(d) => Some(parse_decimal(d)),
        _ => None,
    };
    let (n, d) = (lit(n)?, lit(d)?);
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(n / d)
}

fn parse_decimal(d: &str) -> BigRational {
    let (whole, frac) = d.split_once('.').expect("decimal has a point");
    let numer: BigInt = format!("{whole}{frac}").parse().expect("decimal digits");
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    BigRational::new(numer, denom)
}

fn indexed_head(s: &Sexp, parts: &[Sexp]) -> Result<(String, Vec<u32>)> {
    let name = parts
        .get(1)
        .and_then(Sexp::symbol)
        .ok_or_else(|| s.error("expected (_ name index...)"))?;
    let mut indices = Vec::new();
    for p in &parts[2..] {
        match &p.kind {
            SexpKind::Numeral(n) => indices.push(n.parse::<u32>().map_err(|_| p.error("index too large"))?),
            _ => return Err(p.error("index must be a numeral")),
        }
    }
    if indices.is_empty() {
        return Err(s.error("indexed identifier without indices"));
    }
    Ok((name.to_string(), indices))
}

/// Parses a sort expression.
pub fn parse_sort(s: &Sexp) -> Result<Sort> {
    match &s.kind {
        SexpKind::Symbol(name) => match name.as_str() {
            "Bool" => Ok(Sort::Bool),
            "Int" => Ok(Sort::Int),
            "Real" => Ok(Sort::Real),
            "String" => Ok(Sort::String),
            _ => Err(s.sort_error(format!("unknown sort {name}"))),
        },
        SexpKind::List(items) => match items.first().and_then(Sexp::symbol) {
            Some("_") => {
                let (name, indices) = indexed_head(s, items)?;
                match (name.as_str(), indices.as_slice()) {
                    ("BitVec", [w]) => Sort::bitvec(*w).map_err(|e| s.sort_error(e.to_string())),
                    _ => Err(s.sort_error(format!("unknown sort (_ {name} ...)"))),
                }
            }
            Some("->") if items.len() >= 3 => {
                let mut sorts = items[1..].iter().map(parse_sort).collect::<Result<Vec<_>>>()?;
                let codomain = sorts.pop().expect("at least two sorts");
                Sort::function(sorts, codomain).map_err(|e| s.sort_error(e.to_string()))
            }
            _ => Err(s.sort_error("malformed sort")),
        },
        _ => Err(s.sort_error("malformed sort")),
    }
}

/// Parses `((x S) ...)`.
pub fn sorted_vars(s: &Sexp) -> Result<Vec<(String, Sort)>> {
    let items = s.list().ok_or_else(|| s.error("expected a list of sorted variables"))?;
    let mut out: Vec<(String, Sort)> = Vec::new();
    for item in items {
        match item.list() {
            Some([x, sort]) => {
                let x = x.symbol().ok_or_else(|| x.error("expected a variable name"))?;
                if out.iter().any(|(y, _)| y == x) {
                    return Err(item.error(format!("duplicate variable {x}")));
                }
                out.push((x.to_string(), parse_sort(sort)?));
            }
            _ => return Err(item.error("expected (name sort)")),
        }
    }
    Ok(out)
}

/// Converts a parsed literal term to a value of the expected sort. Closed
/// ground terms such as `(- 5)` or `(/ 1.0 3.0)` are folded first.
pub fn term_to_value(t: &Term, expected: &Sort) -> std::result::Result<Value, FrontendError> {
    let folded = crate::term::partial_evaluate(t).map_err(|e| FrontendError::ValueSyntax(e.to_string()))?;
    let Some(v) = folded.as_value() else {
        return Err(FrontendError::ValueSyntax(format!(
            "not a value: {}",
            super::printer::print_term(t)
        )));
    };
    let v = match (v, expected) {
        (Value::Int(i), Sort::Real) => Value::Real(BigRational::from_integer(i.clone())),
        _ => v.clone(),
    };
    let found = v.sort();
    if &found != expected {
        return Err(FrontendError::SortMismatch {
            expected: expected.clone(),
            found,
        });
    }
    Ok(v)
}
