//! Signatures of the built-in theory operators.

use super::{Sort, TermError};

const CORE: &[&str] = &["not", "and", "or", "xor", "=>", "=", "distinct", "ite"];
const ARITH: &[&str] = &[
    "+", "-", "*", "div", "mod", "abs", "/", "<=", "<", ">=", ">", "to_real", "to_int", "is_int",
];
const BV: &[&str] = &[
    "bvadd", "bvsub", "bvmul", "bvudiv", "bvurem", "bvsdiv", "bvsrem", "bvsmod", "bvand", "bvor",
    "bvxor", "bvnand", "bvnor", "bvxnor", "bvshl", "bvlshr", "bvashr", "bvnot", "bvneg", "bvult",
    "bvule", "bvugt", "bvuge", "bvslt", "bvsle", "bvsgt", "bvsge", "bvcomp", "concat", "extract",
    "zero_extend", "sign_extend", "repeat", "rotate_left", "rotate_right",
];
const STRINGS: &[&str] = &[
    "str.++", "str.len", "str.at", "str.substr", "str.contains", "str.prefixof", "str.suffixof",
    "str.indexof", "str.replace", "str.<", "str.<=", "str.to_int", "str.to.int", "str.from_int",
    "int.to.str",
];

pub fn is_theory_symbol(name: &str) -> bool {
    CORE.contains(&name) || ARITH.contains(&name) || BV.contains(&name) || STRINGS.contains(&name)
}

/// Operators that SMT-LIB declares `:chainable`; the parser expands
/// `(< a b c)` into `(and (< a b) (< b c))`.
pub fn is_chainable(name: &str) -> bool {
    matches!(name, "=" | "<=" | "<" | ">=" | ">" | "str.<" | "str.<=")
}

fn err(name: &str, args: &[Sort]) -> TermError {
    let shown: Vec<String> = args.iter().map(Sort::to_string).collect();
    TermError::IllFormed(format!("operator {name} not applicable to ({})", shown.join(" ")))
}

fn all_same<'a>(args: &'a [Sort]) -> Option<&'a Sort> {
    let first = args.first()?;
    args.iter().all(|s| s == first).then_some(first)
}

fn bv_width(s: &Sort) -> Option<u32> {
    match s {
        Sort::BitVec(w) => Some(*w),
        _ => None,
    }
}

/// Result sort of a theory application, or an error if ill-sorted.
pub fn result_sort(name: &str, indices: &[u32], args: &[Sort]) -> Result<Sort, TermError> {
    use Sort::*;
    let e = || err(name, args);
    let n = args.len();
    let all = |s: &Sort| args.iter().all(|a| a == s);
    let sort = match name {
        "not" if n == 1 && all(&Bool) => Bool,
        "and" | "or" | "xor" | "=>" if n >= 1 && all(&Bool) => Bool,
        "=" | "distinct" if n >= 2 && all_same(args).is_some() => Bool,
        "ite" if n == 3 && args[0] == Bool && args[1] == args[2] => args[1].clone(),
        "+" | "*" | "-" if n >= 1 && (all(&Int) || all(&Real)) => args[0].clone(),
        "div" | "mod" if n == 2 && all(&Int) => Int,
        "abs" if n == 1 && all(&Int) => Int,
        "/" if n >= 2 && all(&Real) => Real,
        "<=" | "<" | ">=" | ">" if n >= 2 && (all(&Int) || all(&Real)) => Bool,
        "to_real" if n == 1 && all(&Int) => Real,
        "to_int" if n == 1 && all(&Real) => Int,
        "is_int" if n == 1 && all(&Real) => Bool,
        "bvnot" | "bvneg" if n == 1 && bv_width(&args[0]).is_some() => args[0].clone(),
        "bvadd" | "bvmul" | "bvand" | "bvor" | "bvxor"
            if n >= 2 && bv_width(&args[0]).is_some() && all_same(args).is_some() =>
        {
            args[0].clone()
        }
        "bvsub" | "bvudiv" | "bvurem" | "bvsdiv" | "bvsrem" | "bvsmod" | "bvnand" | "bvnor"
        | "bvxnor" | "bvshl" | "bvlshr" | "bvashr"
            if n == 2 && bv_width(&args[0]).is_some() && args[0] == args[1] =>
        {
            args[0].clone()
        }
        "bvult" | "bvule" | "bvugt" | "bvuge" | "bvslt" | "bvsle" | "bvsgt" | "bvsge"
            if n == 2 && bv_width(&args[0]).is_some() && args[0] == args[1] =>
        {
            Bool
        }
        "bvcomp" if n == 2 && bv_width(&args[0]).is_some() && args[0] == args[1] => BitVec(1),
        "concat" if n == 2 => match (bv_width(&args[0]), bv_width(&args[1])) {
            (Some(a), Some(b)) => BitVec(a + b),
            _ => return Err(e()),
        },
        "extract" if n == 1 && indices.len() == 2 => match bv_width(&args[0]) {
            Some(w) if indices[0] < w && indices[1] <= indices[0] => {
                BitVec(indices[0] - indices[1] + 1)
            }
            _ => return Err(e()),
        },
        "zero_extend" | "sign_extend" if n == 1 && indices.len() == 1 => match bv_width(&args[0]) {
            Some(w) => BitVec(w + indices[0]),
            None => return Err(e()),
        },
        "repeat" if n == 1 && indices.len() == 1 && indices[0] >= 1 => match bv_width(&args[0]) {
            Some(w) => BitVec(w * indices[0]),
            None => return Err(e()),
        },
        "rotate_left" | "rotate_right" if n == 1 && indices.len() == 1 => match bv_width(&args[0]) {
            Some(w) => BitVec(w),
            None => return Err(e()),
        },
        "str.++" if n >= 1 && all(&String) => String,
        "str.len" | "str.to_int" | "str.to.int" if n == 1 && all(&String) => Int,
        "str.at" if n == 2 && args[0] == String && args[1] == Int => String,
        "str.substr" if n == 3 && args[0] == String && args[1] == Int && args[2] == Int => String,
        "str.contains" | "str.prefixof" | "str.suffixof" | "str.<" | "str.<="
            if n == 2 && all(&String) =>
        {
            Bool
        }
        "str.indexof" if n == 3 && args[0] == String && args[1] == String && args[2] == Int => Int,
        "str.replace" if n == 3 && all(&String) => String,
        "str.from_int" | "int.to.str" if n == 1 && all(&Int) => String,
        _ => return Err(e()),
    };
    let indexed = matches!(
        name,
        "extract" | "zero_extend" | "sign_extend" | "repeat" | "rotate_left" | "rotate_right"
    );
    if !indexed && !indices.is_empty() {
        return Err(e());
    }
    Ok(sort)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_sorts() {
        assert_eq!(result_sort("+", &[], &[Sort::Int, Sort::Int]).unwrap(), Sort::Int);
        assert!(result_sort("+", &[], &[Sort::Int, Sort::Real]).is_err());
        assert_eq!(result_sort("<=", &[], &[Sort::Int, Sort::Int]).unwrap(), Sort::Bool);
        assert!(result_sort("div", &[], &[Sort::Real, Sort::Real]).is_err());
    }

    #[test]
    fn bitvector_sorts() {
        let b4 = Sort::BitVec(4);
        assert_eq!(result_sort("extract", &[2, 1], &[b4.clone()]).unwrap(), Sort::BitVec(2));
        assert!(result_sort("extract", &[4, 1], &[b4.clone()]).is_err());
        assert_eq!(
            result_sort("concat", &[], &[b4.clone(), Sort::BitVec(3)]).unwrap(),
            Sort::BitVec(7)
        );
        assert!(result_sort("bvadd", &[], &[b4, Sort::BitVec(3)]).is_err());
    }

    #[test]
    fn core_sorts() {
        assert_eq!(
            result_sort("ite", &[], &[Sort::Bool, Sort::String, Sort::String]).unwrap(),
            Sort::String
        );
        assert!(result_sort("=", &[], &[Sort::Int]).is_err());
        assert!(result_sort("not", &[1], &[Sort::Bool]).is_err());
    }
}
