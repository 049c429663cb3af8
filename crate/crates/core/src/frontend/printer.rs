//! SMT-LIB concrete syntax for sorts, values and terms.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::term::{FunDef, Lambda, Quantifier, Sort, Term, Value};

fn is_simple_symbol(s: &str) -> bool {
    const EXTRA: &str = "~!@$%^&*_-+=<>.?/";
    !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || EXTRA.contains(c))
}

/// Prints a symbol, quoting it with `|...|` when it is not a simple symbol.
pub fn print_symbol(s: &str) -> String {
    if is_simple_symbol(s) {
        s.to_string()
    } else {
        format!("|{s}|")
    }
}

pub fn print_sort(s: &Sort) -> String {
    s.to_string()
}

fn print_int(out: &mut String, i: &BigInt) {
    if i.is_negative() {
        let _ = write!(out, "(- {})", -i);
    } else {
        let _ = write!(out, "{i}");
    }
}

fn print_string_literal(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\"\""),
            '\\' => out.push_str("\\u{5c}"),
            ' '..='~' => out.push(c),
            _ => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
        }
    }
    out.push('"');
}

fn print_params(out: &mut String, params: &[(String, Sort)]) {
    out.push('(');
    for (i, (x, s)) in params.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "({} {s})", print_symbol(x));
    }
    out.push(')');
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => print_int(out, i),
        Value::Real(r) => {
            let neg = r.is_negative();
            let r = r.abs();
            if neg {
                out.push_str("(- ");
            }
            if r.denom().is_one() {
                let _ = write!(out, "{}.0", r.numer());
            } else {
                let _ = write!(out, "(/ {}.0 {}.0)", r.numer(), r.denom());
            }
            if neg {
                out.push(')');
            }
        }
        Value::BitVec(bv) => {
            let digits = bv.bits().to_str_radix(2);
            let _ = write!(out, "#b{:0>width$}", digits, width = bv.width() as usize);
        }
        Value::String(s) => print_string_literal(out, s),
        Value::Lambda(Lambda { params, body }) => {
            out.push_str("(lambda ");
            print_params(out, params);
            out.push(' ');
            write_term(out, body);
            out.push(')');
        }
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Value(v) => write_value(out, v),
        Term::Var(x, _) => out.push_str(&print_symbol(x)),
        Term::App(app) => {
            let head = if app.symbol.indices.is_empty() {
                print_symbol(&app.symbol.name)
            } else {
                let idx: Vec<String> = app.symbol.indices.iter().map(u32::to_string).collect();
                format!("(_ {} {})", app.symbol.name, idx.join(" "))
            };
            if app.args.is_empty() {
                out.push_str(&head);
                return;
            }
            out.push('(');
            out.push_str(&head);
            for a in &app.args {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
        Term::Let(bs, body) => {
            out.push_str("(let (");
            for (i, (x, e)) in bs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "({} ", print_symbol(x));
                write_term(out, e);
                out.push(')');
            }
            out.push_str(") ");
            write_term(out, body);
            out.push(')');
        }
        Term::Quant(q, vars, body) => {
            out.push_str(match q {
                Quantifier::Forall => "(forall ",
                Quantifier::Exists => "(exists ",
            });
            print_params(out, vars);
            out.push(' ');
            write_term(out, body);
            out.push(')');
        }
    }
}

/// SMT-LIB text of a value. Negative numbers print as `(- n)` and
/// bit-vectors as `#b…` with exactly `width` digits.
pub fn print_value(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out
}

/// SMT-LIB text of a term. Printing is sort-agnostic.
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

/// `(define-fun name ((x S) ...) S body)`.
pub fn print_define_fun(def: &FunDef) -> String {
    let mut out = format!("(define-fun {} ", print_symbol(&def.name));
    print_params(&mut out, &def.params);
    let _ = write!(out, " {} ", def.codomain);
    write_term(&mut out, &def.body);
    out.push(')');
    out
}

/// Serializes a lambda value as a named `define-fun`, the form in which
/// candidate functions are handed to oracle executables.
pub fn print_lambda_as_define_fun(name: &str, lambda: &Lambda) -> String {
    print_define_fun(&FunDef::new(name, lambda.params.clone(), (*lambda.body).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::BitVecValue;

    #[test]
    fn literals() {
        assert_eq!(print_value(&Value::int(76)), "76");
        assert_eq!(print_value(&Value::int(-3)), "(- 3)");
        assert_eq!(print_value(&Value::BitVec(BitVecValue::from_u64(4, 2))), "#b0010");
        assert_eq!(print_value(&Value::String("a\"b".into())), "\"a\"\"b\"");
        let half = num_rational::BigRational::new((-1).into(), 2.into());
        assert_eq!(print_value(&Value::Real(half)), "(- (/ 1.0 2.0))");
    }

    #[test]
    fn printing_is_sort_agnostic() {
        let app = Term::oracle("isPrime", vec![Term::int(2)], Sort::Bool);
        let t = Term::App(crate::term::App {
            symbol: crate::term::Symbol::theory("+"),
            args: vec![app, Term::int(1)],
            sort: Sort::Int,
        });
        assert_eq!(print_term(&t), "(+ (isPrime 2) 1)");
    }

    #[test]
    fn symbols_are_quoted_when_needed() {
        assert_eq!(print_symbol("x!0"), "x!0");
        assert_eq!(print_symbol("a b"), "|a b|");
        assert_eq!(print_symbol("1x"), "|1x|");
    }

    #[test]
    fn define_fun() {
        let x = Term::var("x", Sort::Int);
        let def = FunDef::new("f", vec![("x".into(), Sort::Int)], Term::theory("+", vec![x, Term::int(1)]).unwrap());
        assert_eq!(print_define_fun(&def), "(define-fun f ((x Int)) Int (+ x 1))");
    }
}
