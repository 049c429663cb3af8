use std::collections::{BTreeMap, BTreeSet};

use super::{FunDef, Term, TermError};

/// Simultaneous replacement of free variables.
pub type Binding = BTreeMap<String, Term>;

/// Definitions for ordinary function symbols, keyed by symbol name.
pub type FunctionTable = BTreeMap<String, FunDef>;

/// Capture-avoiding simultaneous substitution `e·{x → t}`.
///
/// Every replaced occurrence must have the sort of its replacement.
pub fn substitute(e: &Term, b: &Binding) -> Result<Term, TermError> {
    if b.is_empty() {
        return Ok(e.clone());
    }
    subst(e, b)
}

fn subst(e: &Term, b: &Binding) -> Result<Term, TermError> {
    Ok(match e {
        Term::Value(_) => e.clone(),
        Term::Var(name, sort) => match b.get(name) {
            Some(t) => {
                let found = t.sort();
                if &found != sort {
                    return Err(TermError::mismatch(sort, &found, format!("substitution for {name}")));
                }
                t.clone()
            }
            None => e.clone(),
        },
        Term::App(app) => {
            let mut app = app.clone();
            for a in &mut app.args {
                *a = subst(a, b)?;
            }
            Term::App(app)
        }
        Term::Let(bindings, body) => {
            let bound: Vec<(String, Term)> = bindings
                .iter()
                .map(|(x, t)| Ok((x.clone(), subst(t, b)?)))
                .collect::<Result<_, TermError>>()?;
            let binders: Vec<(String, crate::term::Sort)> =
                bound.iter().map(|(x, t)| (x.clone(), t.sort())).collect();
            let (renamed, inner) = enter_binder(&binders, body, b);
            let new_body = subst(body, &inner)?;
            Term::Let(
                renamed
                    .into_iter()
                    .zip(bound)
                    .map(|((x, _), (_, t))| (x, t))
                    .collect(),
                Box::new(new_body),
            )
        }
        Term::Quant(q, vars, body) => {
            let (renamed, inner) = enter_binder(vars, body, b);
            Term::Quant(*q, renamed, Box::new(subst(body, &inner)?))
        }
    })
}

/// Restricts the binding below a binder, renaming binder variables that would
/// capture free variables of a replacement term.
fn enter_binder(
    binders: &[(String, crate::term::Sort)],
    body: &Term,
    b: &Binding,
) -> (Vec<(String, crate::term::Sort)>, Binding) {
    let mut inner: Binding = b
        .iter()
        .filter(|(x, _)| !binders.iter().any(|(y, _)| y == *x))
        .map(|(x, t)| (x.clone(), t.clone()))
        .collect();
    let body_free = body.free_vars();
    let mut replacement_free = BTreeSet::new();
    for (x, t) in &inner {
        if body_free.contains(x) {
            replacement_free.extend(t.free_vars());
        }
    }
    let mut renamed = Vec::with_capacity(binders.len());
    for (x, sort) in binders {
        if replacement_free.contains(x) {
            let mut k = 0usize;
            let fresh = loop {
                let candidate = format!("{x}!{k}");
                if !replacement_free.contains(&candidate)
                    && !body_free.contains(&candidate)
                    && !inner.contains_key(&candidate)
                    && !binders.iter().any(|(y, _)| *y == candidate)
                {
                    break candidate;
                }
                k += 1;
            };
            inner.insert(x.clone(), Term::Var(fresh.clone(), sort.clone()));
            renamed.push((fresh, sort.clone()));
        } else {
            renamed.push((x.clone(), sort.clone()));
        }
    }
    (renamed, inner)
}

/// Replaces applications of defined ordinary symbols by their (beta-reduced)
/// definitions: `e·{f → λ}`. A bare occurrence of a defined function symbol
/// of positive arity becomes its lambda value.
///
/// Definitions must not be recursive.
pub fn apply_definitions(e: &Term, defs: &FunctionTable) -> Result<Term, TermError> {
    if defs.is_empty() {
        return Ok(e.clone());
    }
    apply(e, defs)
}

fn apply(e: &Term, defs: &FunctionTable) -> Result<Term, TermError> {
    Ok(match e {
        Term::Value(_) | Term::Var(..) => e.clone(),
        Term::App(app) => {
            let args: Vec<Term> = app.args.iter().map(|a| apply(a, defs)).collect::<Result<_, _>>()?;
            match defs.get(&app.symbol.name) {
                Some(def) if app.symbol.kind == super::SymbolKind::Ordinary => {
                    if args.len() == def.params.len() {
                        let binding: Binding = def
                            .params
                            .iter()
                            .zip(args)
                            .map(|((x, _), t)| (x.clone(), t))
                            .collect();
                        apply(&substitute(&def.body, &binding)?, defs)?
                    } else if args.is_empty() {
                        Term::Value(def.to_value().ok_or_else(|| {
                            TermError::IllFormed(format!("definition of {} is not a value", def.name))
                        })?)
                    } else {
                        return Err(TermError::IllFormed(format!(
                            "{} expects {} arguments, got {}",
                            def.name,
                            def.params.len(),
                            args.len()
                        )));
                    }
                }
                _ => {
                    let mut app = app.clone();
                    app.args = args;
                    Term::App(app)
                }
            }
        }
        Term::Let(bs, body) => Term::Let(
            bs.iter()
                .map(|(x, t)| Ok((x.clone(), apply(t, defs)?)))
                .collect::<Result<_, TermError>>()?,
            Box::new(apply(body, defs)?),
        ),
        Term::Quant(q, vars, body) => Term::Quant(*q, vars.clone(), Box::new(apply(body, defs)?)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Quantifier, Sort, Value};

    fn x() -> Term {
        Term::var("x", Sort::Int)
    }
    fn y() -> Term {
        Term::var("y", Sort::Int)
    }

    #[test]
    fn replaces_free_variable() {
        let e = Term::theory("+", vec![x(), Term::int(1)]).unwrap();
        let b: Binding = [("x".to_string(), Term::int(41))].into();
        let expected = Term::theory("+", vec![Term::int(41), Term::int(1)]).unwrap();
        assert_eq!(substitute(&e, &b).unwrap(), expected);
    }

    #[test]
    fn empty_binding_is_identity() {
        assert_eq!(substitute(&x(), &Binding::new()).unwrap(), x());
    }

    #[test]
    fn sort_mismatch_is_reported() {
        let b: Binding = [("x".to_string(), Term::bool(true))].into();
        assert!(matches!(substitute(&x(), &b), Err(TermError::SortMismatch { .. })));
    }

    #[test]
    fn renames_binder_to_avoid_capture() {
        // (exists ((y Int)) (= (f x y) 0)) with x -> y
        let body = Term::eq(Term::ordinary("f", vec![x(), y()], Sort::Int), Term::int(0)).unwrap();
        let e = Term::Quant(Quantifier::Exists, vec![("y".into(), Sort::Int)], Box::new(body));
        let b: Binding = [("x".to_string(), y())].into();
        let out = substitute(&e, &b).unwrap();
        let Term::Quant(_, vars, body) = &out else { panic!() };
        assert_eq!(vars[0].0, "y!0");
        let expected = Term::eq(
            Term::ordinary("f", vec![y(), Term::var("y!0", Sort::Int)], Sort::Int),
            Term::int(0),
        )
        .unwrap();
        assert_eq!(**body, expected);
        assert_eq!(out.free_vars(), ["y".to_string()].into());
    }

    #[test]
    fn shadowed_variables_are_not_replaced() {
        let e = Term::Let(vec![("x".into(), Term::int(2))], Box::new(x()));
        let b: Binding = [("x".to_string(), Term::int(7))].into();
        assert_eq!(substitute(&e, &b).unwrap(), e);
    }

    #[test]
    fn definitions_beta_reduce() {
        let def = FunDef::new(
            "f",
            vec![("x".into(), Sort::Int)],
            Term::theory("+", vec![x(), Term::int(1)]).unwrap(),
        );
        let defs: FunctionTable = [("f".to_string(), def.clone())].into();
        let e = Term::ordinary("f", vec![Term::int(4)], Sort::Int);
        let out = apply_definitions(&e, &defs).unwrap();
        assert_eq!(out, Term::theory("+", vec![Term::int(4), Term::int(1)]).unwrap());
        let bare = Term::ordinary("f", vec![], def.sig().as_sort());
        assert!(matches!(apply_definitions(&bare, &defs).unwrap(), Term::Value(Value::Lambda(_))));
    }
}
