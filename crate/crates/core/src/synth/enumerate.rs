//! Size-ordered bottom-up enumeration.
//!
//! Each non-terminal keeps a bank of terms bucketed by size. When the store
//! only applies a target to literal arguments, two terms that agree on all
//! those argument tuples are interchangeable and only the first (smallest)
//! is kept.

use std::collections::{HashMap, HashSet};

use super::grammar::{constant_pool, Grammar, Production};
use super::{application_points, check_conjunct, Candidate, Resolver, SynthTarget};
use crate::session::{EngineError, Limits};
use crate::term::{partial_evaluate, substitute, Binding, FunDef, FunctionTable, Sort, Term, Value};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Outputs(Vec<Value>),
    Syntax(Term),
}

struct Work {
    spent: u64,
    budget: u64,
}

impl Work {
    fn tick(&mut self) -> Result<(), EngineError> {
        self.spent += 1;
        if self.spent > self.budget {
            return Err(EngineError::BudgetExhausted(format!("{} candidate terms examined", self.budget)));
        }
        Ok(())
    }
}

struct Bank {
    grammar: Grammar,
    params: Vec<(String, Sort)>,
    pools: HashMap<Sort, Vec<Value>>,
    points: Option<Vec<Vec<Value>>>,
    /// `levels[nt][size]`
    levels: Vec<Vec<Vec<Term>>>,
    seen: Vec<HashSet<Key>>,
    /// Size of the last level that added a new term to some non-terminal.
    last_growth: usize,
    max_base: usize,
    max_holes: usize,
}

impl Bank {
    fn new(target: &SynthTarget, store: &[Term], points: Option<Vec<Vec<Value>>>) -> Self {
        let grammar = target.grammar_or_default();
        let mut pools = HashMap::new();
        for prods in &grammar.rules {
            for p in prods {
                if let Production::AnyConstant(s) = p {
                    pools.entry(s.clone()).or_insert_with(|| constant_pool(s, store));
                }
            }
        }
        let mut max_base = 1;
        let mut max_holes = 0;
        for prods in &grammar.rules {
            for p in prods {
                if let Production::Term(t) = p {
                    let holes = grammar.holes(t).len();
                    max_base = max_base.max(t.size() - holes);
                    max_holes = max_holes.max(holes);
                }
            }
        }
        let n = grammar.nonterminals.len();
        Bank {
            grammar,
            params: target.params.clone(),
            pools,
            points,
            levels: vec![vec![Vec::new()]; n],
            seen: vec![HashSet::new(); n],
            last_growth: 0,
            max_base,
            max_holes,
        }
    }

    fn computed(&self) -> usize {
        self.levels[0].len() - 1
    }

    /// Once no level up to `horizon` has grown, every later term would be
    /// built from the same children and so would not be new either.
    fn saturated(&self) -> bool {
        if self.grammar.max_depth.is_some() {
            return false;
        }
        let horizon = self.max_base + self.max_holes * self.last_growth;
        self.computed() > horizon.max(self.last_growth)
    }

    fn level(&mut self, nt: usize, size: usize, work: &mut Work) -> Result<&[Term], EngineError> {
        while self.computed() < size {
            self.grow(work)?;
        }
        Ok(&self.levels[nt][size])
    }

    fn key(&self, t: &Term) -> Key {
        let Some(points) = &self.points else {
            return Key::Syntax(t.clone());
        };
        let mut outs = Vec::with_capacity(points.len());
        for p in points {
            let binding: Binding = self
                .params
                .iter()
                .zip(p)
                .map(|((x, _), v)| (x.clone(), Term::Value(v.clone())))
                .collect();
            match substitute(t, &binding).and_then(|s| partial_evaluate(&s)) {
                Ok(Term::Value(v)) => outs.push(v),
                _ => return Key::Syntax(t.clone()),
            }
        }
        Key::Outputs(outs)
    }

    fn grow(&mut self, work: &mut Work) -> Result<(), EngineError> {
        let n = self.computed() + 1;
        for lv in &mut self.levels {
            lv.push(Vec::new());
        }
        let mut changed = true;
        while changed {
            changed = false;
            for nt in 0..self.grammar.nonterminals.len() {
                for prod in self.grammar.rules[nt].clone() {
                    for t in self.expand(&prod, n) {
                        work.tick()?;
                        if self.grammar.max_depth.is_some_and(|d| t.depth() > d) {
                            continue;
                        }
                        let key = self.key(&t);
                        if self.seen[nt].insert(key) {
                            self.levels[nt][n].push(t);
                            self.last_growth = n;
                            changed = true;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Terms of exactly `size` nodes derived by one application of `prod`.
    fn expand(&self, prod: &Production, size: usize) -> Vec<Term> {
        match prod {
            Production::AnyVariable(s) if size == 1 => self
                .params
                .iter()
                .filter(|(_, ps)| ps == s)
                .map(|(x, ps)| Term::var(x.clone(), ps.clone()))
                .collect(),
            Production::AnyConstant(s) if size == 1 => {
                self.pools.get(s).into_iter().flatten().cloned().map(Term::Value).collect()
            }
            Production::AnyVariable(_) | Production::AnyConstant(_) => Vec::new(),
            Production::Term(t) => {
                let holes = self.grammar.holes(t);
                let base = t.size() - holes.len();
                if holes.is_empty() {
                    return if base == size { vec![t.clone()] } else { Vec::new() };
                }
                if size < base + holes.len() {
                    return Vec::new();
                }
                let mut out = Vec::new();
                let mut chosen = Vec::with_capacity(holes.len());
                self.fill_holes(t, &holes, size - base, &mut chosen, &mut out);
                out
            }
        }
    }

    fn fill_holes<'a>(
        &'a self,
        template: &Term,
        holes: &[usize],
        remaining: usize,
        chosen: &mut Vec<&'a Term>,
        out: &mut Vec<Term>,
    ) {
        let i = chosen.len();
        if i == holes.len() {
            if remaining == 0 {
                let mut it = chosen.iter().copied();
                out.push(plug(&self.grammar, template, &mut it));
            }
            return;
        }
        let left_after = holes.len() - i - 1;
        let (lo, hi) = if left_after == 0 {
            (remaining, remaining)
        } else {
            (1, remaining.saturating_sub(left_after))
        };
        for s in lo..=hi {
            let Some(terms) = self.levels[holes[i]].get(s) else { continue };
            for t in terms {
                chosen.push(t);
                self.fill_holes(template, holes, remaining - s, chosen, out);
                chosen.pop();
            }
        }
    }
}

/// Replaces the non-terminal occurrences of `template`, left to right.
fn plug<'a>(g: &Grammar, template: &Term, fill: &mut impl Iterator<Item = &'a Term>) -> Term {
    match template {
        Term::Var(name, _) if g.nonterminal_index(name).is_some() => {
            fill.next().expect("one filler per hole").clone()
        }
        Term::App(app) => {
            let mut app = app.clone();
            for a in &mut app.args {
                *a = plug(g, a, fill);
            }
            Term::App(app)
        }
        Term::Let(bs, body) => {
            let bs = bs.iter().map(|(x, e)| (x.clone(), plug(g, e, fill))).collect();
            Term::Let(bs, Box::new(plug(g, body, fill)))
        }
        Term::Quant(q, vars, body) => Term::Quant(*q, vars.clone(), Box::new(plug(g, body, fill))),
        other => other.clone(),
    }
}

/// All terms of the start symbol up to `max_size` nodes, in enumeration
/// order, without behavioural pruning.
pub fn enumerate_terms(target: &SynthTarget, max_size: usize) -> Vec<Term> {
    let mut bank = Bank::new(target, &[], None);
    let mut work = Work {
        spent: 0,
        budget: u64::MAX,
    };
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(bank.level(0, size, &mut work).expect("unbounded budget").iter().cloned());
    }
    out
}

pub(super) fn search(
    targets: &[SynthTarget],
    store: &[Term],
    limits: &Limits,
    resolve: &mut Resolver<'_>,
) -> Result<Option<Candidate>, EngineError> {
    if targets.is_empty() {
        return Err(EngineError::Unsupported("nothing to synthesize".into()));
    }
    let points = application_points(targets, store);
    let mut banks: Vec<Bank> = targets
        .iter()
        .map(|t| Bank::new(t, store, points[&t.name].clone()))
        .collect();
    let mut work = Work {
        spent: 0,
        budget: limits.max_candidates,
    };
    let mut order: Vec<usize> = (0..store.len()).collect();
    let k = targets.len();
    for total in k..=limits.max_candidate_size.max(k) {
        for sizes in compositions(total, k) {
            if let Some(c) = try_sizes(targets, &mut banks, &sizes, store, &mut order, &mut work, resolve)? {
                return Ok(Some(c));
            }
        }
        if banks.iter().all(Bank::saturated) {
            return Ok(None);
        }
    }
    Err(EngineError::BudgetExhausted(format!(
        "no candidate up to size {}",
        limits.max_candidate_size
    )))
}

/// Compositions of `total` into `k` positive parts, lexicographically.
fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for s in 1..=remaining - (k - 1) {
            prefix.push(s);
            go(remaining - s, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, k, &mut Vec::new(), &mut out);
    out
}

fn try_sizes(
    targets: &[SynthTarget],
    banks: &mut [Bank],
    sizes: &[usize],
    store: &[Term],
    order: &mut Vec<usize>,
    work: &mut Work,
    resolve: &mut Resolver<'_>,
) -> Result<Option<Candidate>, EngineError> {
    let mut levels: Vec<Vec<Term>> = Vec::with_capacity(banks.len());
    for (b, &s) in banks.iter_mut().zip(sizes) {
        let lv = b.level(0, s, work)?;
        if lv.is_empty() {
            return Ok(None);
        }
        levels.push(lv.to_vec());
    }
    let mut index = vec![0usize; levels.len()];
    loop {
        work.tick()?;
        let definitions: Vec<FunDef> = targets
            .iter()
            .zip(&index)
            .zip(&levels)
            .map(|((t, &i), lv)| FunDef {
                name: t.name.clone(),
                params: t.params.clone(),
                codomain: t.codomain.clone(),
                body: lv[i].clone(),
            })
            .collect();
        let candidate = Candidate { definitions };
        if satisfies(&candidate.table(), store, order, resolve)? {
            return Ok(Some(candidate));
        }
        let mut d = levels.len();
        loop {
            if d == 0 {
                return Ok(None);
            }
            d -= 1;
            index[d] += 1;
            if index[d] < levels[d].len() {
                break;
            }
            index[d] = 0;
        }
    }
}

/// Checks the store, moving a failing conjunct to the front so that later
/// candidates are refuted sooner.
fn satisfies(
    table: &FunctionTable,
    store: &[Term],
    order: &mut Vec<usize>,
    resolve: &mut Resolver<'_>,
) -> Result<bool, EngineError> {
    // oracle-free conjuncts first
    for pass in [false, true] {
        for pos in 0..order.len() {
            let c = &store[order[pos]];
            if c.contains_oracle() != pass {
                continue;
            }
            if !check_conjunct(table, c, resolve)? {
                let i = order.remove(pos);
                order.insert(0, i);
                return Ok(false);
            }
        }
    }
    Ok(true)
}
