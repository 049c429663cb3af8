//! Sorted terms over theory, ordinary and oracle symbols.

mod eval;
mod position;
mod subst;
pub mod theory;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use eval::partial_evaluate;
pub use position::{find_oracle_application, replace_at, OracleApplication, Position};
pub use subst::{apply_definitions, substitute, Binding, FunctionTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("sort mismatch in {context}: expected {expected}, found {found}")]
    SortMismatch {
        expected: Sort,
        found: Sort,
        context: String,
    },
    #[error("invalid position {0}")]
    BadPosition(Position),
    #[error("evaluation error: {0}")]
    EvalError(String),
    #[error("ill-formed term: {0}")]
    IllFormed(String),
}

impl TermError {
    pub(crate) fn mismatch(expected: &Sort, found: &Sort, context: impl Into<String>) -> Self {
        TermError::SortMismatch {
            expected: expected.clone(),
            found: found.clone(),
            context: context.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    Int,
    Real,
    BitVec(u32),
    String,
    /// Function sort; the domain is never empty.
    Fn(Vec<Sort>, Box<Sort>),
}

impl Sort {
    pub fn bitvec(width: u32) -> Result<Sort, TermError> {
        if width == 0 {
            return Err(TermError::IllFormed("bit-vector width must be positive".into()));
        }
        Ok(Sort::BitVec(width))
    }

    pub fn function(domain: Vec<Sort>, codomain: Sort) -> Result<Sort, TermError> {
        if domain.is_empty() {
            return Err(TermError::IllFormed("function sort with empty domain".into()));
        }
        Ok(Sort::Fn(domain, Box::new(codomain)))
    }

    pub fn is_function(&self) -> bool {
        matches!(self, Sort::Fn(..))
    }

    /// The default value used when a backend model omits a symbol.
    pub fn default_value(&self) -> Value {
        match self {
            Sort::Bool => Value::Bool(false),
            Sort::Int => Value::Int(BigInt::zero()),
            Sort::Real => Value::Real(BigRational::zero()),
            Sort::BitVec(w) => Value::BitVec(BitVecValue::new(*w, BigUint::zero())),
            Sort::String => Value::String(String::new()),
            Sort::Fn(domain, codomain) => {
                let params = domain
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (format!("x{i}"), s.clone()))
                    .collect();
                Value::Lambda(Lambda {
                    params,
                    body: Box::new(Term::Value(codomain.default_value())),
                })
            }
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Int => write!(f, "Int"),
            Sort::Real => write!(f, "Real"),
            Sort::BitVec(w) => write!(f, "(_ BitVec {w})"),
            Sort::String => write!(f, "String"),
            Sort::Fn(domain, codomain) => {
                write!(f, "(->")?;
                for s in domain {
                    write!(f, " {s}")?;
                }
                write!(f, " {codomain})")
            }
        }
    }
}

/// A fixed-width bit-vector constant. `bits < 2^width` always holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVecValue {
    width: u32,
    bits: BigUint,
}

impl BitVecValue {
    /// Builds a bit-vector, truncating `bits` to `width` bits.
    pub fn new(width: u32, bits: BigUint) -> Self {
        let modulus = BigUint::one() << width;
        BitVecValue {
            width,
            bits: bits % modulus,
        }
    }

    pub fn from_u64(width: u32, bits: u64) -> Self {
        Self::new(width, BigUint::from(bits))
    }

    /// Wraps a (possibly negative) integer into two's complement.
    pub fn from_signed(width: u32, value: &BigInt) -> Self {
        let modulus = BigInt::one() << width;
        let mut v = value % &modulus;
        if v < BigInt::zero() {
            v += &modulus;
        }
        Self::new(width, v.to_biguint().expect("non-negative after wrap"))
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bits(&self) -> &BigUint {
        &self.bits
    }

    pub fn to_signed(&self) -> BigInt {
        let v = BigInt::from(self.bits.clone());
        if self.bits.bit(u64::from(self.width - 1)) {
            v - (BigInt::one() << self.width)
        } else {
            v
        }
    }

    pub fn bit(&self, i: u32) -> bool {
        self.bits.bit(u64::from(i))
    }
}

/// A closed lambda term: the value of a function-sorted symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lambda {
    pub params: Vec<(String, Sort)>,
    pub body: Box<Term>,
}

impl Lambda {
    pub fn sort(&self) -> Sort {
        Sort::Fn(
            self.params.iter().map(|(_, s)| s.clone()).collect(),
            Box::new(self.body.sort()),
        )
    }

    /// Applies the lambda to argument values and folds the result.
    pub fn apply(&self, args: &[Value]) -> Result<Term, TermError> {
        if args.len() != self.params.len() {
            return Err(TermError::IllFormed(format!(
                "lambda of arity {} applied to {} arguments",
                self.params.len(),
                args.len()
            )));
        }
        let binding: Binding = self
            .params
            .iter()
            .zip(args)
            .map(|((name, _), v)| (name.clone(), Term::Value(v.clone())))
            .collect();
        partial_evaluate(&substitute(&self.body, &binding)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
    Real(BigRational),
    BitVec(BitVecValue),
    String(String),
    Lambda(Lambda),
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Int(BigInt::from(v))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Value::Bool(_) => Sort::Bool,
            Value::Int(_) => Sort::Int,
            Value::Real(_) => Sort::Real,
            Value::BitVec(bv) => Sort::BitVec(bv.width),
            Value::String(_) => Sort::String,
            Value::Lambda(l) => l.sort(),
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(i) => Some(i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolKind {
    /// Interpreted by the background theory (`+`, `and`, `bvadd`, `ite`, ...).
    Theory,
    /// Declared or to-be-synthesized function symbols.
    Ordinary,
    /// Symbols whose semantics is given by an oracle.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    /// Indices of indexed theory operators such as `(_ extract 7 4)`.
    pub indices: Vec<u32>,
    pub kind: SymbolKind,
}

impl Symbol {
    pub fn theory(name: impl Into<String>) -> Self {
        Symbol {
            name: name.into(),
            indices: Vec::new(),
            kind: SymbolKind::Theory,
        }
    }

    pub fn ordinary(name: impl Into<String>) -> Self {
        Symbol {
            name: name.into(),
            indices: Vec::new(),
            kind: SymbolKind::Ordinary,
        }
    }

    pub fn oracle(name: impl Into<String>) -> Self {
        Symbol {
            name: name.into(),
            indices: Vec::new(),
            kind: SymbolKind::Oracle,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct App {
    pub symbol: Symbol,
    pub args: Vec<Term>,
    /// Result sort of the application.
    pub sort: Sort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Value(Value),
    /// A variable: bound by a binder, a function parameter, or a universally
    /// quantified specification variable.
    Var(String, Sort),
    App(App),
    Let(Vec<(String, Term)>, Box<Term>),
    Quant(Quantifier, Vec<(String, Sort)>, Box<Term>),
}

impl From<Value> for Term {
    fn from(v: Value) -> Self {
        Term::Value(v)
    }
}

impl Term {
    pub fn int(v: i64) -> Term {
        Term::Value(Value::int(v))
    }

    pub fn bool(b: bool) -> Term {
        Term::Value(Value::Bool(b))
    }

    pub fn var(name: impl Into<String>, sort: Sort) -> Term {
        Term::Var(name.into(), sort)
    }

    /// Applies a theory operator, computing (and checking) the result sort.
    pub fn theory(name: &str, args: Vec<Term>) -> Result<Term, TermError> {
        Self::indexed(name, Vec::new(), args)
    }

    pub fn indexed(name: &str, indices: Vec<u32>, args: Vec<Term>) -> Result<Term, TermError> {
        let sorts: Vec<Sort> = args.iter().map(Term::sort).collect();
        let sort = theory::result_sort(name, &indices, &sorts)?;
        Ok(Term::App(App {
            symbol: Symbol {
                name: name.to_string(),
                indices,
                kind: SymbolKind::Theory,
            },
            args,
            sort,
        }))
    }

    pub fn ordinary(name: impl Into<String>, args: Vec<Term>, sort: Sort) -> Term {
        Term::App(App {
            symbol: Symbol::ordinary(name),
            args,
            sort,
        })
    }

    pub fn oracle(name: impl Into<String>, args: Vec<Term>, sort: Sort) -> Term {
        Term::App(App {
            symbol: Symbol::oracle(name),
            args,
            sort,
        })
    }

    pub fn not(t: Term) -> Term {
        Term::theory("not", vec![t]).expect("not of Bool")
    }

    /// Conjunction; `true` when empty, the sole conjunct when singleton.
    pub fn and(mut conjuncts: Vec<Term>) -> Term {
        match conjuncts.len() {
            0 => Term::bool(true),
            1 => conjuncts.pop().unwrap(),
            _ => Term::App(App {
                symbol: Symbol::theory("and"),
                args: conjuncts,
                sort: Sort::Bool,
            }),
        }
    }

    pub fn eq(a: Term, b: Term) -> Result<Term, TermError> {
        Term::theory("=", vec![a, b])
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Value(v) => v.sort(),
            Term::Var(_, s) => s.clone(),
            Term::App(app) => app.sort.clone(),
            Term::Let(_, body) => body.sort(),
            Term::Quant(..) => Sort::Bool,
        }
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            Term::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Term::Value(_))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Term::Value(Value::Bool(true)))
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Term::Value(Value::Bool(false)))
    }

    /// Number of nodes; values and variables count one.
    pub fn size(&self) -> usize {
        match self {
            Term::Value(_) | Term::Var(..) => 1,
            Term::App(app) => 1 + app.args.iter().map(Term::size).sum::<usize>(),
            Term::Let(bs, body) => 1 + bs.iter().map(|(_, t)| t.size()).sum::<usize>() + body.size(),
            Term::Quant(_, _, body) => 1 + body.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Value(_) | Term::Var(..) => 1,
            Term::App(app) => 1 + app.args.iter().map(Term::depth).max().unwrap_or(0),
            Term::Let(bs, body) => {
                1 + bs.iter().map(|(_, t)| t.depth()).chain([body.depth()]).max().unwrap_or(0)
            }
            Term::Quant(_, _, body) => 1 + body.depth(),
        }
    }

    /// Free variable names.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Value(_) => {}
            Term::Var(name, _) => {
                if !bound.contains(name) {
                    out.insert(name.clone());
                }
            }
            Term::App(app) => app.args.iter().for_each(|a| a.collect_free_vars(bound, out)),
            Term::Let(bs, body) => {
                for (_, t) in bs {
                    t.collect_free_vars(bound, out);
                }
                let n = bound.len();
                bound.extend(bs.iter().map(|(x, _)| x.clone()));
                body.collect_free_vars(bound, out);
                bound.truncate(n);
            }
            Term::Quant(_, vars, body) => {
                let n = bound.len();
                bound.extend(vars.iter().map(|(x, _)| x.clone()));
                body.collect_free_vars(bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Visits every application node in pre-order.
    pub fn visit_apps<'a>(&'a self, f: &mut impl FnMut(&'a App)) {
        match self {
            Term::Value(_) | Term::Var(..) => {}
            Term::App(app) => {
                f(app);
                app.args.iter().for_each(|a| a.visit_apps(f));
            }
            Term::Let(bs, body) => {
                bs.iter().for_each(|(_, t)| t.visit_apps(f));
                body.visit_apps(f);
            }
            Term::Quant(_, _, body) => body.visit_apps(f),
        }
    }

    /// Names of symbols of the given kind occurring in the term.
    pub fn symbols(&self, kind: SymbolKind) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_apps(&mut |app| {
            if app.symbol.kind == kind {
                out.insert(app.symbol.name.clone());
            }
        });
        out
    }

    pub fn contains_oracle(&self) -> bool {
        let mut found = false;
        self.visit_apps(&mut |app| found |= app.symbol.kind == SymbolKind::Oracle);
        found
    }

    /// Top-level conjuncts (flattening nested `and`).
    pub fn conjuncts(&self) -> Vec<Term> {
        match self {
            Term::App(app) if app.symbol.kind == SymbolKind::Theory && app.symbol.name == "and" => {
                app.args.iter().flat_map(Term::conjuncts).collect()
            }
            Term::Value(Value::Bool(true)) => Vec::new(),
            t => vec![t.clone()],
        }
    }
}

/// Signature of a declared function symbol. Constants have an empty domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunSig {
    pub domain: Vec<Sort>,
    pub codomain: Sort,
}

impl FunSig {
    pub fn constant(sort: Sort) -> Self {
        FunSig {
            domain: Vec::new(),
            codomain: sort,
        }
    }

    pub fn new(domain: Vec<Sort>, codomain: Sort) -> Self {
        FunSig { domain, codomain }
    }

    /// The sort of the symbol used as a value: `Fn` for non-constants.
    pub fn as_sort(&self) -> Sort {
        if self.domain.is_empty() {
            self.codomain.clone()
        } else {
            Sort::Fn(self.domain.clone(), Box::new(self.codomain.clone()))
        }
    }
}

/// A function definition `(define-fun name params codomain body)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunDef {
    pub name: String,
    pub params: Vec<(String, Sort)>,
    pub codomain: Sort,
    pub body: Term,
}

impl FunDef {
    pub fn new(name: impl Into<String>, params: Vec<(String, Sort)>, body: Term) -> Self {
        let codomain = body.sort();
        FunDef {
            name: name.into(),
            params,
            codomain,
            body,
        }
    }

    pub fn sig(&self) -> FunSig {
        FunSig::new(
            self.params.iter().map(|(_, s)| s.clone()).collect(),
            self.codomain.clone(),
        )
    }

    /// The definition as a value: a lambda, or the body itself for constants.
    pub fn to_value(&self) -> Option<Value> {
        if self.params.is_empty() {
            self.body.as_value().cloned()
        } else {
            Some(Value::Lambda(Lambda {
                params: self.params.clone(),
                body: Box::new(self.body.clone()),
            }))
        }
    }
}
