//! Partial evaluation: folding value-saturated theory applications.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{substitute, App, BitVecValue, Binding, Symbol, SymbolKind, Term, TermError, Value};

/// Computes the partial-evaluation normal form of `e`.
///
/// Theory applications whose arguments are all values are folded; boolean
/// connectives and `ite` are simplified around value arguments; `let` is
/// expanded. Ordinary and oracle applications stay in place. Operations the
/// folder does not define (integer division by zero, real division by zero)
/// are left unfolded.
pub fn partial_evaluate(e: &Term) -> Result<Term, TermError> {
    match e {
        Term::Value(_) | Term::Var(..) => Ok(e.clone()),
        Term::App(app) => {
            let args = app
                .args
                .iter()
                .map(partial_evaluate)
                .collect::<Result<Vec<_>, _>>()?;
            simplify(&app.symbol, args, &app.sort)
        }
        Term::Let(bindings, body) => {
            let mut b = Binding::new();
            for (x, t) in bindings {
                b.insert(x.clone(), partial_evaluate(t)?);
            }
            partial_evaluate(&substitute(body, &b)?)
        }
        Term::Quant(q, vars, body) => {
            let body = partial_evaluate(body)?;
            if body.is_value() {
                Ok(body)
            } else {
                Ok(Term::Quant(*q, vars.clone(), Box::new(body)))
            }
        }
    }
}

fn rebuild(symbol: &Symbol, args: Vec<Term>, sort: &super::Sort) -> Term {
    Term::App(App {
        symbol: symbol.clone(),
        args,
        sort: sort.clone(),
    })
}

fn not_of(t: Term) -> Term {
    match t {
        Term::Value(Value::Bool(b)) => Term::bool(!b),
        Term::App(app) if is_theory(&app.symbol, "not") => app.args.into_iter().next().unwrap(),
        t => Term::App(App {
            symbol: Symbol::theory("not"),
            args: vec![t],
            sort: super::Sort::Bool,
        }),
    }
}

fn is_theory(sym: &Symbol, name: &str) -> bool {
    sym.kind == SymbolKind::Theory && sym.name == name
}

fn simplify(symbol: &Symbol, args: Vec<Term>, sort: &super::Sort) -> Result<Term, TermError> {
    if symbol.kind != SymbolKind::Theory {
        return Ok(rebuild(symbol, args, sort));
    }
    if args.iter().all(Term::is_value) {
        let values: Vec<&Value> = args.iter().filter_map(Term::as_value).collect();
        if let Some(v) = fold(&symbol.name, &symbol.indices, &values, sort)? {
            return Ok(Term::Value(v));
        }
        return Ok(rebuild(symbol, args, sort));
    }
    Ok(match symbol.name.as_str() {
        "not" => not_of(args.into_iter().next().unwrap()),
        "and" | "or" => {
            let absorbing = symbol.name == "or";
            let mut kept = Vec::with_capacity(args.len());
            for a in args {
                match a.as_value().and_then(Value::as_bool) {
                    Some(b) if b == absorbing => return Ok(Term::bool(absorbing)),
                    Some(_) => {}
                    None => kept.push(a),
                }
            }
            match kept.len() {
                0 => Term::bool(!absorbing),
                1 => kept.pop().unwrap(),
                _ => rebuild(symbol, kept, sort),
            }
        }
        "=>" => {
            let mut args = args;
            let mut acc = args.pop().unwrap();
            while let Some(lhs) = args.pop() {
                acc = implies(lhs, acc);
            }
            acc
        }
        "ite" => {
            let mut it = args.into_iter();
            let (c, a, b) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            match c.as_value().and_then(Value::as_bool) {
                Some(true) => a,
                Some(false) => b,
                None if a == b => a,
                None => rebuild(symbol, vec![c, a, b], sort),
            }
        }
        "=" if args.len() == 2 => {
            if args[0] == args[1] {
                Term::bool(true)
            } else {
                rebuild(symbol, args, sort)
            }
        }
        _ => rebuild(symbol, args, sort),
    })
}

fn implies(lhs: Term, rhs: Term) -> Term {
    match (lhs.as_value().and_then(Value::as_bool), rhs.as_value().and_then(Value::as_bool)) {
        (Some(true), _) => rhs,
        (Some(false), _) | (_, Some(true)) => Term::bool(true),
        (_, Some(false)) => not_of(lhs),
        _ if lhs == rhs => Term::bool(true),
        _ => Term::App(App {
            symbol: Symbol::theory("=>"),
            args: vec![lhs, rhs],
            sort: super::Sort::Bool,
        }),
    }
}

fn eval_err(msg: impl Into<String>) -> TermError {
    TermError::EvalError(msg.into())
}

fn bools(vals: &[&Value]) -> Result<Vec<bool>, TermError> {
    vals.iter()
        .map(|v| v.as_bool().ok_or_else(|| eval_err("expected Bool value")))
        .collect()
}

enum Num {
    Int(Vec<BigInt>),
    Real(Vec<BigRational>),
}

fn nums(vals: &[&Value]) -> Result<Num, TermError> {
    match vals.first() {
        Some(Value::Int(_)) => vals
            .iter()
            .map(|v| match v {
                Value::Int(i) => Ok(i.clone()),
                _ => Err(eval_err("mixed numeric arguments")),
            })
            .collect::<Result<_, _>>()
            .map(Num::Int),
        Some(Value::Real(_)) => vals
            .iter()
            .map(|v| match v {
                Value::Real(r) => Ok(r.clone()),
                _ => Err(eval_err("mixed numeric arguments")),
            })
            .collect::<Result<_, _>>()
            .map(Num::Real),
        _ => Err(eval_err("expected numeric values")),
    }
}

fn bvs<'a>(vals: &[&'a Value]) -> Result<Vec<&'a BitVecValue>, TermError> {
    vals.iter()
        .map(|v| match v {
            Value::BitVec(b) => Ok(b),
            _ => Err(eval_err("expected bit-vector value")),
        })
        .collect()
}

fn strs(vals: &[&Value]) -> Result<Vec<Vec<char>>, TermError> {
    vals.iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.chars().collect()),
            _ => Err(eval_err("expected string value")),
        })
        .collect()
}

fn int_arg(v: &Value) -> Result<&BigInt, TermError> {
    v.as_int().ok_or_else(|| eval_err("expected Int value"))
}

fn chain<T>(xs: &[T], rel: impl Fn(&T, &T) -> bool) -> bool {
    xs.windows(2).all(|w| rel(&w[0], &w[1]))
}

fn arith<T>(name: &str, xs: Vec<T>) -> T
where
    T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T>
        + std::ops::Neg<Output = T>,
{
    let mut it = xs.into_iter();
    let first = it.next().unwrap();
    match name {
        "-" => {
            let rest: Vec<T> = it.collect();
            if rest.is_empty() {
                -first
            } else {
                rest.into_iter().fold(first, |a, b| a - b)
            }
        }
        "+" => it.fold(first, |a, b| a + b),
        _ => it.fold(first, |a, b| a * b),
    }
}

fn compare<T: PartialOrd>(name: &str, xs: &[T]) -> bool {
    match name {
        "<=" => chain(xs, |a, b| a <= b),
        "<" => chain(xs, |a, b| a < b),
        ">=" => chain(xs, |a, b| a >= b),
        _ => chain(xs, |a, b| a > b),
    }
}

fn ones(width: u32) -> BigUint {
    (BigUint::one() << width) - BigUint::one()
}

fn bv(width: u32, bits: BigUint) -> Value {
    Value::BitVec(BitVecValue::new(width, bits))
}

fn bv_neg(a: &BitVecValue) -> BitVecValue {
    BitVecValue::from_signed(a.width(), &-BigInt::from(a.bits().clone()))
}

fn bv_udiv(a: &BitVecValue, b: &BitVecValue) -> BitVecValue {
    if b.bits().is_zero() {
        BitVecValue::new(a.width(), ones(a.width()))
    } else {
        BitVecValue::new(a.width(), a.bits() / b.bits())
    }
}

fn bv_urem(a: &BitVecValue, b: &BitVecValue) -> BitVecValue {
    if b.bits().is_zero() {
        a.clone()
    } else {
        BitVecValue::new(a.width(), a.bits() % b.bits())
    }
}

fn msb(a: &BitVecValue) -> bool {
    a.bit(a.width() - 1)
}

fn shift_amount(b: &BitVecValue, width: u32) -> Option<u32> {
    b.bits().to_u32().filter(|s| *s < width)
}

fn fold_bv(name: &str, indices: &[u32], xs: &[&BitVecValue]) -> Result<Option<Value>, TermError> {
    let w = xs[0].width();
    let a = xs[0];
    let bin = || xs.get(1).copied().ok_or_else(|| eval_err(format!("{name} expects two arguments")));
    let v = match name {
        "bvadd" => bv(w, xs.iter().fold(BigUint::zero(), |acc, x| acc + x.bits())),
        "bvmul" => bv(w, xs.iter().fold(BigUint::one(), |acc, x| acc * x.bits())),
        "bvand" => bv(w, xs.iter().skip(1).fold(a.bits().clone(), |acc, x| acc & x.bits())),
        "bvor" => bv(w, xs.iter().skip(1).fold(a.bits().clone(), |acc, x| acc | x.bits())),
        "bvxor" => bv(w, xs.iter().skip(1).fold(a.bits().clone(), |acc, x| acc ^ x.bits())),
        "bvsub" => {
            let b = bin()?;
            Value::BitVec(BitVecValue::from_signed(
                w,
                &(BigInt::from(a.bits().clone()) - BigInt::from(b.bits().clone())),
            ))
        }
        "bvnot" => bv(w, a.bits() ^ ones(w)),
        "bvneg" => Value::BitVec(bv_neg(a)),
        "bvnand" => bv(w, (a.bits() & bin()?.bits()) ^ ones(w)),
        "bvnor" => bv(w, (a.bits() | bin()?.bits()) ^ ones(w)),
        "bvxnor" => bv(w, (a.bits() ^ bin()?.bits()) ^ ones(w)),
        "bvcomp" => bv(1, BigUint::from(u8::from(a == bin()?))),
        "bvudiv" => Value::BitVec(bv_udiv(a, bin()?)),
        "bvurem" => Value::BitVec(bv_urem(a, bin()?)),
        "bvsdiv" => {
            let b = bin()?;
            Value::BitVec(match (msb(a), msb(b)) {
                (false, false) => bv_udiv(a, b),
                (true, false) => bv_neg(&bv_udiv(&bv_neg(a), b)),
                (false, true) => bv_neg(&bv_udiv(a, &bv_neg(b))),
                (true, true) => bv_udiv(&bv_neg(a), &bv_neg(b)),
            })
        }
        "bvsrem" => {
            let b = bin()?;
            Value::BitVec(match (msb(a), msb(b)) {
                (false, false) => bv_urem(a, b),
                (true, false) => bv_neg(&bv_urem(&bv_neg(a), b)),
                (false, true) => bv_urem(a, &bv_neg(b)),
                (true, true) => bv_neg(&bv_urem(&bv_neg(a), &bv_neg(b))),
            })
        }
        "bvsmod" => {
            let b = bin()?;
            let abs = |x: &BitVecValue| if msb(x) { bv_neg(x) } else { x.clone() };
            let u = bv_urem(&abs(a), &abs(b));
            let add = |x: &BitVecValue, y: &BitVecValue| BitVecValue::new(w, x.bits() + y.bits());
            Value::BitVec(if u.bits().is_zero() {
                u
            } else {
                match (msb(a), msb(b)) {
                    (false, false) => u,
                    (true, false) => add(&bv_neg(&u), b),
                    (false, true) => add(&u, b),
                    (true, true) => bv_neg(&u),
                }
            })
        }
        "bvshl" => match shift_amount(bin()?, w) {
            Some(s) => bv(w, a.bits() << s),
            None => bv(w, BigUint::zero()),
        },
        "bvlshr" => match shift_amount(bin()?, w) {
            Some(s) => bv(w, a.bits() >> s),
            None => bv(w, BigUint::zero()),
        },
        "bvashr" => {
            let s = shift_amount(bin()?, w).unwrap_or(w);
            let shifted = a.to_signed() >> s.min(w);
            Value::BitVec(BitVecValue::from_signed(w, &shifted))
        }
        "bvult" => Value::Bool(a.bits() < bin()?.bits()),
        "bvule" => Value::Bool(a.bits() <= bin()?.bits()),
        "bvugt" => Value::Bool(a.bits() > bin()?.bits()),
        "bvuge" => Value::Bool(a.bits() >= bin()?.bits()),
        "bvslt" => Value::Bool(a.to_signed() < bin()?.to_signed()),
        "bvsle" => Value::Bool(a.to_signed() <= bin()?.to_signed()),
        "bvsgt" => Value::Bool(a.to_signed() > bin()?.to_signed()),
        "bvsge" => Value::Bool(a.to_signed() >= bin()?.to_signed()),
        "concat" => {
            let b = bin()?;
            bv(w + b.width(), (a.bits() << b.width()) | b.bits())
        }
        "extract" => {
            let (hi, lo) = (indices[0], indices[1]);
            bv(hi - lo + 1, a.bits() >> lo)
        }
        "zero_extend" => bv(w + indices[0], a.bits().clone()),
        "sign_extend" => Value::BitVec(BitVecValue::from_signed(w + indices[0], &a.to_signed())),
        "repeat" => {
            let mut acc = BigUint::zero();
            for _ in 0..indices[0] {
                acc = (acc << w) | a.bits();
            }
            bv(w * indices[0], acc)
        }
        "rotate_left" | "rotate_right" => {
            let mut r = indices[0] % w;
            if name == "rotate_right" {
                r = (w - r) % w;
            }
            bv(w, (a.bits() << r) | (a.bits() >> (w - r)))
        }
        _ => return Ok(None),
    };
    Ok(Some(v))
}

fn index_of(hay: &[char], needle: &[char], from: usize) -> Option<usize> {
    if needle.is_empty() {
        return Some(from);
    }
    if needle.len() > hay.len() {
        return None;
    }
    (from..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()] == *needle)
}

fn to_index(i: &BigInt) -> Option<usize> {
    if i.is_negative() {
        None
    } else {
        i.to_usize()
    }
}

fn fold_str(name: &str, vals: &[&Value]) -> Result<Option<Value>, TermError> {
    let s = |cs: &[char]| Value::String(cs.iter().collect());
    let v = match name {
        "str.++" => s(&strs(vals)?.concat()),
        "str.len" => Value::Int(BigInt::from(strs(vals)?[0].len())),
        "str.at" => {
            let x = &strs(&vals[..1])?[0];
            match to_index(int_arg(vals[1])?) {
                Some(i) if i < x.len() => s(&x[i..=i]),
                _ => s(&[]),
            }
        }
        "str.substr" => {
            let x = &strs(&vals[..1])?[0];
            let (i, n) = (int_arg(vals[1])?, int_arg(vals[2])?);
            match (to_index(i), n.is_positive()) {
                (Some(i), true) if i < x.len() => {
                    let n = n.to_usize().unwrap_or(usize::MAX);
                    let end = i.saturating_add(n).min(x.len());
                    s(&x[i..end])
                }
                _ => s(&[]),
            }
        }
        "str.contains" => {
            let xs = strs(vals)?;
            Value::Bool(index_of(&xs[0], &xs[1], 0).is_some())
        }
        "str.prefixof" => {
            let xs = strs(vals)?;
            Value::Bool(xs[1].starts_with(&xs[0]))
        }
        "str.suffixof" => {
            let xs = strs(vals)?;
            Value::Bool(xs[1].ends_with(&xs[0]))
        }
        "str.indexof" => {
            let xs = strs(&vals[..2])?;
            let found = to_index(int_arg(vals[2])?)
                .filter(|&i| i <= xs[0].len())
                .and_then(|i| index_of(&xs[0], &xs[1], i));
            Value::Int(found.map_or_else(|| BigInt::from(-1), BigInt::from))
        }
        "str.replace" => {
            let xs = strs(vals)?;
            match index_of(&xs[0], &xs[1], 0) {
                Some(i) => {
                    let mut out = xs[0][..i].to_vec();
                    out.extend_from_slice(&xs[2]);
                    out.extend_from_slice(&xs[0][i + xs[1].len()..]);
                    s(&out)
                }
                None => s(&xs[0]),
            }
        }
        "str.<" => {
            let xs = strs(vals)?;
            Value::Bool(chain(&xs, |a, b| a < b))
        }
        "str.<=" => {
            let xs = strs(vals)?;
            Value::Bool(chain(&xs, |a, b| a <= b))
        }
        "str.to_int" | "str.to.int" => {
            let x = &strs(vals)?[0];
            if !x.is_empty() && x.iter().all(char::is_ascii_digit) {
                let digits: String = x.iter().collect();
                Value::Int(digits.parse().expect("decimal digits"))
            } else {
                Value::int(-1)
            }
        }
        "str.from_int" | "int.to.str" => {
            let i = int_arg(vals[0])?;
            Value::String(if i.is_negative() { String::new() } else { i.to_string() })
        }
        _ => return Ok(None),
    };
    Ok(Some(v))
}

/// Evaluates a theory operator on values; `None` when the folder leaves the
/// application in place.
fn fold(
    name: &str,
    indices: &[u32],
    vals: &[&Value],
    _sort: &super::Sort,
) -> Result<Option<Value>, TermError> {
    let v = match name {
        "not" => Value::Bool(!bools(vals)?[0]),
        "and" => Value::Bool(bools(vals)?.iter().all(|b| *b)),
        "or" => Value::Bool(bools(vals)?.iter().any(|b| *b)),
        "xor" => Value::Bool(bools(vals)?.iter().fold(false, |a, b| a ^ b)),
        "=>" => {
            let bs = bools(vals)?;
            Value::Bool(bs.iter().rev().skip(1).fold(*bs.last().unwrap(), |acc, a| !a || acc))
        }
        "=" => Value::Bool(chain(vals, |a, b| a == b)),
        "distinct" => Value::Bool(
            (0..vals.len()).all(|i| (i + 1..vals.len()).all(|j| vals[i] != vals[j])),
        ),
        "ite" => {
            let c = vals[0].as_bool().ok_or_else(|| eval_err("ite condition"))?;
            if c {
                vals[1].clone()
            } else {
                vals[2].clone()
            }
        }
        "+" | "-" | "*" => match nums(vals)? {
            Num::Int(xs) => Value::Int(arith(name, xs)),
            Num::Real(xs) => Value::Real(arith(name, xs)),
        },
        "<=" | "<" | ">=" | ">" => Value::Bool(match nums(vals)? {
            Num::Int(xs) => compare(name, &xs),
            Num::Real(xs) => compare(name, &xs),
        }),
        "div" | "mod" => {
            let (a, b) = (int_arg(vals[0])?, int_arg(vals[1])?);
            if b.is_zero() {
                return Ok(None);
            }
            let r = a.mod_floor(&b.abs());
            if name == "mod" {
                Value::Int(r)
            } else {
                Value::Int((a - &r) / b)
            }
        }
        "abs" => Value::Int(int_arg(vals[0])?.abs()),
        "/" => match nums(vals)? {
            Num::Real(xs) => {
                if xs[1..].iter().any(Zero::is_zero) {
                    return Ok(None);
                }
                let mut it = xs.into_iter();
                let first = it.next().unwrap();
                Value::Real(it.fold(first, |a, b| a / b))
            }
            Num::Int(_) => return Ok(None),
        },
        "to_real" => Value::Real(BigRational::from_integer(int_arg(vals[0])?.clone())),
        "to_int" | "is_int" => match vals[0] {
            Value::Real(r) if name == "to_int" => Value::Int(r.floor().to_integer()),
            Value::Real(r) => Value::Bool(r.is_integer()),
            _ => return Err(eval_err("expected Real value")),
        },
        n if n.starts_with("bv")
            || matches!(
                n,
                "concat" | "extract" | "zero_extend" | "sign_extend" | "repeat" | "rotate_left"
                    | "rotate_right"
            ) =>
        {
            return fold_bv(name, indices, &bvs(vals)?);
        }
        n if n.starts_with("str.") || n == "int.to.str" => return fold_str(name, vals),
        _ => return Ok(None),
    };
    Ok(Some(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Sort;

    fn t(name: &str, args: Vec<Term>) -> Term {
        Term::theory(name, args).unwrap()
    }

    fn pe(e: &Term) -> Term {
        partial_evaluate(e).unwrap()
    }

    #[test]
    fn folds_under_oracle_application() {
        // θ(1+1)+1 → θ(2)+1
        let theta = |a| Term::oracle("theta", vec![a], Sort::Int);
        let e = t("+", vec![theta(t("+", vec![Term::int(1), Term::int(1)])), Term::int(1)]);
        assert_eq!(pe(&e), t("+", vec![theta(Term::int(2)), Term::int(1)]));
    }

    #[test]
    fn boolean_identity() {
        let b = Term::var("b", Sort::Bool);
        let e = t("and", vec![t("<=", vec![Term::int(3), Term::int(5)]), b.clone()]);
        assert_eq!(pe(&e), b);
    }

    #[test]
    fn ite_on_value_condition() {
        let a = Term::var("a", Sort::Int);
        let b = Term::var("b", Sort::Int);
        assert_eq!(pe(&t("ite", vec![Term::bool(true), a.clone(), b])), a);
    }

    #[test]
    fn integer_division_is_euclidean() {
        let div = |a, b| pe(&t("div", vec![Term::int(a), Term::int(b)]));
        let md = |a, b| pe(&t("mod", vec![Term::int(a), Term::int(b)]));
        assert_eq!(div(7, 2), Term::int(3));
        assert_eq!(md(-7, 2), Term::int(1));
        assert_eq!(div(-7, 2), Term::int(-4));
        assert_eq!(div(-7, -2), Term::int(4));
        assert_eq!(md(-7, -2), Term::int(1));
    }

    #[test]
    fn division_by_zero_left_unfolded() {
        let e = t("div", vec![Term::int(5), Term::int(0)]);
        assert_eq!(pe(&e), e);
    }

    #[test]
    fn bitvector_edge_semantics() {
        let b = |v| Term::Value(Value::BitVec(BitVecValue::from_u64(4, v)));
        assert_eq!(pe(&t("bvudiv", vec![b(5), b(0)])), b(15));
        assert_eq!(pe(&t("bvurem", vec![b(5), b(0)])), b(5));
        assert_eq!(pe(&t("bvadd", vec![b(9), b(9)])), b(2));
        assert_eq!(pe(&t("bvashr", vec![b(8), b(1)])), b(12));
        assert_eq!(pe(&t("bvsdiv", vec![b(14), b(2)])), b(15)); // -2 / 2
        assert_eq!(pe(&t("bvsmod", vec![b(13), b(5)])), b(2)); // -3 mod 5
        assert_eq!(pe(&Term::indexed("extract", vec![2, 1], vec![b(6)]).unwrap()),
            Term::Value(Value::BitVec(BitVecValue::from_u64(2, 3))));
    }

    #[test]
    fn strings_fold() {
        let s = |x: &str| Term::Value(Value::String(x.into()));
        assert_eq!(pe(&t("str.++", vec![s("ab"), s("c")])), s("abc"));
        assert_eq!(pe(&t("str.len", vec![s("héllo")])), Term::int(5));
        assert_eq!(pe(&t("str.substr", vec![s("hello"), Term::int(1), Term::int(3)])), s("ell"));
        assert_eq!(pe(&t("str.indexof", vec![s("abcb"), s("b"), Term::int(2)])), Term::int(3));
        assert_eq!(pe(&t("str.replace", vec![s("aXbX"), s("X"), s("-")])), s("a-bX"));
        assert_eq!(pe(&t("str.to_int", vec![s("12a")])), Term::int(-1));
        assert_eq!(pe(&t("str.prefixof", vec![s("he"), s("hello")])), Term::bool(true));
    }

    #[test]
    fn negated_oracle_answer_folds() {
        // replace_at(¬θ(7), θ(7), true) followed by evaluation gives false
        let e = t("not", vec![Term::bool(true)]);
        assert_eq!(pe(&e), Term::bool(false));
    }

    #[test]
    fn implication_and_equality_with_bool_value() {
        let p = Term::var("p", Sort::Bool);
        assert_eq!(pe(&t("=>", vec![p.clone(), Term::bool(false)])), t("not", vec![p.clone()]));
        let kept = t("=", vec![Term::bool(false), p.clone()]);
        assert_eq!(pe(&kept), kept);
        assert_eq!(pe(&t("not", vec![t("not", vec![p.clone()])])), p);
    }

    #[test]
    fn let_is_expanded() {
        let x = Term::var("x", Sort::Int);
        let e = Term::Let(vec![("x".into(), Term::int(2))], Box::new(t("*", vec![x.clone(), x])));
        assert_eq!(pe(&e), Term::int(4));
    }
}
