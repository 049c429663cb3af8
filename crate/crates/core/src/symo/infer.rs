use std::collections::BTreeMap;

use crate::oracle::OracleInterface;
use crate::synth::{Candidate, SynthTarget};
use crate::term::{App, SymbolKind, Term, Value};

/// A target application in a constraint generator, with the query variable
/// it is compared against by `=` or `distinct`, if any.
struct Pattern<'a> {
    app: &'a App,
    sibling: Option<&'a str>,
}

/// Chooses the queries to send to constraint-only interfaces after a failed
/// verification.
///
/// Query variables of function sort receive the candidate (matched by
/// target name, else by a unique target of that sort). The remaining query
/// variables are bound by matching target applications in the constraint
/// generator, such as `f(y)`, against applications to literals in
/// `phi_inst`; a single leftover variable compared to the matched
/// application receives the candidate's output there. Interfaces with an
/// empty query domain are always selected. Results are in interface order
/// and free of duplicates.
pub fn infer_oracle_inputs(
    free: &[OracleInterface],
    targets: &[SynthTarget],
    phi_inst: &Term,
    candidate: &Candidate,
) -> Vec<(usize, Vec<Value>)> {
    let mut out = Vec::new();
    let ground = ground_applications(targets, phi_inst);
    for (index, iface) in free.iter().enumerate() {
        let mut fixed: BTreeMap<&str, Value> = BTreeMap::new();
        let mut ok = true;
        for (y, sort) in &iface.query {
            if !sort.is_function() {
                continue;
            }
            let by_name = targets.iter().find(|t| t.name == *y && t.sig().as_sort() == *sort);
            let by_sort: Vec<&SynthTarget> = targets.iter().filter(|t| t.sig().as_sort() == *sort).collect();
            let target = by_name.or(if by_sort.len() == 1 { Some(by_sort[0]) } else { None });
            match target.and_then(|t| candidate.get(&t.name)).and_then(|d| d.to_value()) {
                Some(v) => {
                    fixed.insert(y, v);
                }
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        if fixed.len() == iface.query.len() {
            push_unique(&mut out, index, iface, &fixed);
            continue;
        }
        let Some(beta) = &iface.constraint else { continue };
        for pattern in patterns(targets, iface, beta) {
            for (name, args) in &ground {
                if *name != pattern.app.symbol.name {
                    continue;
                }
                let Some(mut binding) = match_args(&pattern.app.args, args, iface, &fixed) else { continue };
                let missing: Vec<&str> = iface
                    .query
                    .iter()
                    .map(|(y, _)| y.as_str())
                    .filter(|y| !binding.contains_key(y))
                    .collect();
                match (missing.as_slice(), pattern.sibling) {
                    ([], _) => {}
                    ([y], Some(s)) if *y == s => match candidate_output(candidate, name, args) {
                        Some(v) => {
                            binding.insert(y, v);
                        }
                        None => continue,
                    },
                    _ => continue,
                }
                push_unique(&mut out, index, iface, &binding);
            }
        }
    }
    out
}

fn push_unique(out: &mut Vec<(usize, Vec<Value>)>, index: usize, iface: &OracleInterface, b: &BTreeMap<&str, Value>) {
    let inputs: Vec<Value> = iface.query.iter().map(|(y, _)| b[y.as_str()].clone()).collect();
    let well_sorted = inputs.iter().zip(&iface.query).all(|(v, (_, s))| v.sort() == *s);
    if well_sorted && !out.iter().any(|(i, v)| *i == index && *v == inputs) {
        out.push((index, inputs));
    }
}

fn ground_applications(targets: &[SynthTarget], t: &Term) -> Vec<(String, Vec<Value>)> {
    let mut out: Vec<(String, Vec<Value>)> = Vec::new();
    t.visit_apps(&mut |app| {
        if app.symbol.kind != SymbolKind::Ordinary || app.args.is_empty() {
            return;
        }
        if !targets.iter().any(|f| f.name == app.symbol.name) {
            return;
        }
        if let Some(args) = app.args.iter().map(|a| a.as_value().cloned()).collect::<Option<Vec<_>>>() {
            let entry = (app.symbol.name.clone(), args);
            if !out.contains(&entry) {
                out.push(entry);
            }
        }
    });
    out
}

fn patterns<'a>(targets: &[SynthTarget], iface: &OracleInterface, beta: &'a Term) -> Vec<Pattern<'a>> {
    let is_query = |t: &Term| matches!(t, Term::Var(y, _) if iface.query.iter().any(|(q, _)| q == y));
    let is_pattern = |t: &'a Term| -> Option<&'a App> {
        let Term::App(app) = t else { return None };
        let usable = app.symbol.kind == SymbolKind::Ordinary
            && !app.args.is_empty()
            && targets.iter().any(|f| f.name == app.symbol.name)
            && app.args.iter().all(|a| a.is_value() || is_query(a));
        usable.then_some(app)
    };
    let mut out: Vec<Pattern<'a>> = Vec::new();
    let mut add = |p: Pattern<'a>| {
        if let Some(existing) = out.iter_mut().find(|q| std::ptr::eq(q.app, p.app)) {
            existing.sibling = existing.sibling.or(p.sibling);
        } else {
            out.push(p);
        }
    };
    walk(beta, &mut |t| {
        if let Some(pa) = is_pattern(t) {
            add(Pattern { app: pa, sibling: None });
        }
        let Term::App(app) = t else { return };
        let comparison = app.symbol.kind == SymbolKind::Theory
            && matches!(app.symbol.name.as_str(), "=" | "distinct")
            && app.args.len() == 2;
        if comparison {
            for (l, r) in [(&app.args[0], &app.args[1]), (&app.args[1], &app.args[0])] {
                if let (Some(pa), Term::Var(y, _)) = (is_pattern(l), r) {
                    if is_query(r) {
                        add(Pattern {
                            app: pa,
                            sibling: Some(y.as_str()),
                        });
                    }
                }
            }
        }
    });
    out
}

fn walk<'a>(t: &'a Term, f: &mut impl FnMut(&'a Term)) {
    f(t);
    match t {
        Term::App(app) => app.args.iter().for_each(|a| walk(a, f)),
        Term::Let(bs, body) => {
            bs.iter().for_each(|(_, e)| walk(e, f));
            walk(body, f);
        }
        Term::Quant(_, _, body) => walk(body, f),
        Term::Value(_) | Term::Var(..) => {}
    }
}

fn match_args<'a>(
    pattern: &'a [Term],
    args: &[Value],
    iface: &OracleInterface,
    fixed: &BTreeMap<&'a str, Value>,
) -> Option<BTreeMap<&'a str, Value>> {
    if pattern.len() != args.len() {
        return None;
    }
    let mut b = fixed.clone();
    for (p, v) in pattern.iter().zip(args) {
        match p {
            Term::Value(c) if c == v => {}
            Term::Var(y, _) if iface.query.iter().any(|(q, _)| q == y) => match b.get(y.as_str()) {
                Some(prev) if prev != v => return None,
                Some(_) => {}
                None => {
                    b.insert(y.as_str(), v.clone());
                }
            },
            _ => return None,
        }
    }
    Some(b)
}

fn candidate_output(candidate: &Candidate, name: &str, args: &[Value]) -> Option<Value> {
    let def = candidate.get(name)?;
    match def.to_value()? {
        Value::Lambda(l) => l.apply(args).ok()?.as_value().cloned(),
        _ => None,
    }
}
