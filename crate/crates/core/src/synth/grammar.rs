//! Grammars for the functions to synthesize.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::term::{BitVecValue, Sort, Term, Value};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Production {
    /// A term whose free variables are parameters or non-terminals; every
    /// non-terminal occurrence is a hole.
    Term(Term),
    /// `(Constant S)`: any literal of sort `S` from the constant pool.
    AnyConstant(Sort),
    /// `(Variable S)`: any parameter of sort `S`.
    AnyVariable(Sort),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    /// Non-terminals with their sorts; the first one is the start symbol.
    pub nonterminals: Vec<(String, Sort)>,
    /// `rules[i]` are the productions of `nonterminals[i]`, in priority order.
    pub rules: Vec<Vec<Production>>,
    /// Optional bound on term depth, applied during enumeration.
    pub max_depth: Option<usize>,
}

impl Grammar {
    /// Builds a grammar, checking that every production has the sort of its
    /// non-terminal and only mentions parameters and non-terminals.
    pub fn new(
        nonterminals: Vec<(String, Sort)>,
        rules: Vec<Vec<Production>>,
        params: &[(String, Sort)],
    ) -> Result<Grammar, String> {
        if nonterminals.is_empty() {
            return Err("grammar has no non-terminals".into());
        }
        if rules.len() != nonterminals.len() {
            return Err("every non-terminal needs a rule list".into());
        }
        for (nt, _) in &nonterminals {
            if params.iter().any(|(p, _)| p == nt) {
                return Err(format!("non-terminal {nt} clashes with a parameter name"));
            }
        }
        let g = Grammar {
            nonterminals,
            rules,
            max_depth: None,
        };
        for (i, prods) in g.rules.iter().enumerate() {
            let (nt, sort) = &g.nonterminals[i];
            for p in prods {
                let found = match p {
                    Production::Term(t) => {
                        for v in t.free_vars() {
                            let known = g.nonterminal_index(&v).is_some()
                                || params.iter().any(|(x, _)| *x == v);
                            if !known {
                                return Err(format!("production of {nt} mentions unknown {v}"));
                            }
                        }
                        t.sort()
                    }
                    Production::AnyConstant(s) | Production::AnyVariable(s) => s.clone(),
                };
                if &found != sort {
                    return Err(format!("production of {nt} has sort {found}, expected {sort}"));
                }
            }
        }
        Ok(g)
    }

    pub fn start_sort(&self) -> &Sort {
        &self.nonterminals[0].1
    }

    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|(n, _)| n == name)
    }

    /// Non-terminals referenced by a production, in left-to-right order.
    pub fn holes(&self, t: &Term) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_holes(t, &mut out);
        out
    }

    fn collect_holes(&self, t: &Term, out: &mut Vec<usize>) {
        match t {
            Term::Var(name, _) => {
                if let Some(i) = self.nonterminal_index(name) {
                    out.push(i);
                }
            }
            Term::App(app) => app.args.iter().for_each(|a| self.collect_holes(a, out)),
            Term::Let(bs, body) => {
                bs.iter().for_each(|(_, e)| self.collect_holes(e, out));
                self.collect_holes(body, out);
            }
            Term::Quant(_, _, body) => self.collect_holes(body, out),
            Term::Value(_) => {}
        }
    }

    /// True when some non-terminal reachable from the start symbol can derive
    /// itself, i.e. the language is infinite.
    pub fn is_recursive(&self) -> bool {
        let n = self.nonterminals.len();
        let edges: Vec<BTreeSet<usize>> = self
            .rules
            .iter()
            .map(|prods| {
                prods
                    .iter()
                    .flat_map(|p| match p {
                        Production::Term(t) => self.holes(t),
                        _ => Vec::new(),
                    })
                    .collect()
            })
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        fn dfs(v: usize, edges: &[BTreeSet<usize>], state: &mut [u8]) -> bool {
            state[v] = 1;
            for &w in &edges[v] {
                if state[w] == 1 || (state[w] == 0 && dfs(w, edges, state)) {
                    return true;
                }
            }
            state[v] = 2;
            false
        }
        let mut state = vec![0u8; n];
        dfs(0, &edges, &mut state)
    }

    /// Default grammar: the theory signature over the parameter and result
    /// sorts, with literal leaves drawn from `constants` plus 0 and 1, and
    /// terms limited to depth 6.
    pub fn default_for(params: &[(String, Sort)], codomain: &Sort) -> Grammar {
        fn add(sorts: &mut Vec<Sort>, s: &Sort) {
            if !sorts.contains(s) && !s.is_function() {
                sorts.push(s.clone());
            }
        }
        let mut sorts: Vec<Sort> = Vec::new();
        add(&mut sorts, codomain);
        params.iter().for_each(|(_, s)| add(&mut sorts, s));
        if sorts.len() > 1 || *codomain == Sort::Int {
            add(&mut sorts, &Sort::Bool);
        }
        let name = |s: &Sort| match s {
            Sort::Bool => "B".to_string(),
            Sort::Int => "I".to_string(),
            Sort::Real => "R".to_string(),
            Sort::BitVec(w) => format!("BV{w}"),
            Sort::String => "S".to_string(),
            Sort::Fn(..) => unreachable!("function sorts filtered"),
        };
        let nt = |s: &Sort| Term::var(name(s), s.clone());
        let app = |op: &str, args: Vec<Term>| Term::theory(op, args).expect("well-sorted default production");
        let mut nonterminals = Vec::new();
        let mut rules = Vec::new();
        for s in &sorts {
            let mut prods = vec![Production::AnyVariable(s.clone()), Production::AnyConstant(s.clone())];
            let x = nt(s);
            match s {
                Sort::Int => {
                    prods.push(Production::Term(app("+", vec![x.clone(), x.clone()])));
                    prods.push(Production::Term(app("-", vec![x.clone(), x.clone()])));
                }
                Sort::Real => {
                    prods.push(Production::Term(app("+", vec![x.clone(), x.clone()])));
                    prods.push(Production::Term(app("-", vec![x.clone(), x.clone()])));
                }
                Sort::BitVec(_) => {
                    for op in ["bvadd", "bvsub", "bvand", "bvor", "bvxor", "bvshl", "bvlshr"] {
                        prods.push(Production::Term(app(op, vec![x.clone(), x.clone()])));
                    }
                    prods.push(Production::Term(app("bvnot", vec![x.clone()])));
                }
                Sort::String => {
                    prods.push(Production::Term(app("str.++", vec![x.clone(), x.clone()])));
                }
                Sort::Bool => {
                    for other in &sorts {
                        let o = nt(other);
                        match other {
                            Sort::Int | Sort::Real => {
                                prods.push(Production::Term(app("<=", vec![o.clone(), o.clone()])));
                                prods.push(Production::Term(app("=", vec![o.clone(), o.clone()])));
                            }
                            Sort::BitVec(_) => {
                                prods.push(Production::Term(app("bvule", vec![o.clone(), o.clone()])));
                                prods.push(Production::Term(app("=", vec![o.clone(), o.clone()])));
                            }
                            Sort::String => {
                                prods.push(Production::Term(app("=", vec![o.clone(), o.clone()])));
                            }
                            _ => {}
                        }
                    }
                    prods.push(Production::Term(app("not", vec![x.clone()])));
                    prods.push(Production::Term(app("and", vec![x.clone(), x.clone()])));
                    prods.push(Production::Term(app("or", vec![x.clone(), x.clone()])));
                }
                Sort::Fn(..) => unreachable!(),
            }
            if *s != Sort::Bool && sorts.contains(&Sort::Bool) {
                prods.push(Production::Term(app("ite", vec![nt(&Sort::Bool), x.clone(), x.clone()])));
            }
            nonterminals.push((name(s), s.clone()));
            rules.push(prods);
        }
        let mut g = Grammar::new(nonterminals, rules, params).expect("default grammar is well-formed");
        g.max_depth = Some(6);
        g
    }
}

/// Constants available to `(Constant S)` leaves: literals of sort `S` found
/// in `sources` plus the base values for the sort.
pub fn constant_pool(sort: &Sort, sources: &[Term]) -> Vec<Value> {
    let mut pool: Vec<Value> = match sort {
        Sort::Int => vec![Value::Int(BigInt::from(0)), Value::Int(BigInt::from(1))],
        Sort::Bool => vec![Value::Bool(false), Value::Bool(true)],
        Sort::BitVec(w) => vec![
            Value::BitVec(BitVecValue::from_u64(*w, 0)),
            Value::BitVec(BitVecValue::from_u64(*w, 1)),
        ],
        Sort::String => vec![Value::String(String::new())],
        Sort::Real => vec![
            Value::Real(BigRational::from_integer(0.into())),
            Value::Real(BigRational::from_integer(1.into())),
        ],
        Sort::Fn(..) => Vec::new(),
    };
    let mut found = BTreeSet::new();
    for t in sources {
        collect_literals(t, sort, &mut found);
    }
    for v in found {
        if !pool.contains(&v) {
            pool.push(v);
        }
    }
    pool
}

fn collect_literals(t: &Term, sort: &Sort, out: &mut BTreeSet<Value>) {
    match t {
        Term::Value(v) if &v.sort() == sort => {
            out.insert(v.clone());
        }
        Term::Value(_) | Term::Var(..) => {}
        Term::App(app) => app.args.iter().for_each(|a| collect_literals(a, sort, out)),
        Term::Let(bs, body) => {
            bs.iter().for_each(|(_, e)| collect_literals(e, sort, out));
            collect_literals(body, sort, out);
        }
        Term::Quant(_, _, body) => collect_literals(body, sort, out),
    }
}
