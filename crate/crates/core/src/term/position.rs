use std::fmt;

use super::{SymbolKind, Term, TermError, Value};

/// Path of child indices from the root. For `let`, the bound terms come
/// first and the body last; a quantifier has its body at index 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "root.{}", parts.join("."))
    }
}

/// An oracle application `θ(c̄)` with value arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleApplication {
    pub symbol: String,
    pub args: Vec<Value>,
    pub position: Position,
}

/// Finds the innermost, leftmost oracle application whose arguments are all
/// values.
pub fn find_oracle_application(e: &Term) -> Option<OracleApplication> {
    let mut path = Vec::new();
    find(e, &mut path)
}

fn find(e: &Term, path: &mut Vec<usize>) -> Option<OracleApplication> {
    let children: Vec<&Term> = match e {
        Term::Value(_) | Term::Var(..) => return None,
        Term::App(app) => app.args.iter().collect(),
        Term::Let(bs, body) => bs.iter().map(|(_, t)| t).chain([body.as_ref()]).collect(),
        Term::Quant(_, _, body) => vec![body.as_ref()],
    };
    for (i, c) in children.into_iter().enumerate() {
        path.push(i);
        let found = find(c, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    match e {
        Term::App(app) if app.symbol.kind == SymbolKind::Oracle && app.args.iter().all(Term::is_value) => {
            Some(OracleApplication {
                symbol: app.symbol.name.clone(),
                args: app.args.iter().filter_map(|a| a.as_value().cloned()).collect(),
                position: Position(path.clone()),
            })
        }
        _ => None,
    }
}

/// Returns the subterm at `pos`, if the position is valid.
pub fn subterm_at<'a>(e: &'a Term, pos: &Position) -> Option<&'a Term> {
    let mut cur = e;
    for &i in &pos.0 {
        cur = match cur {
            Term::App(app) => app.args.get(i)?,
            Term::Let(bs, body) => {
                if i < bs.len() {
                    &bs[i].1
                } else if i == bs.len() {
                    body
                } else {
                    return None;
                }
            }
            Term::Quant(_, _, body) if i == 0 => body,
            _ => return None,
        };
    }
    Some(cur)
}

/// `e[v]`: replaces the subterm at `pos` by the value `v` of the same sort.
pub fn replace_at(e: &Term, pos: &Position, v: Value) -> Result<Term, TermError> {
    let target = subterm_at(e, pos).ok_or_else(|| TermError::BadPosition(pos.clone()))?;
    let (expected, found) = (target.sort(), v.sort());
    if expected != found {
        return Err(TermError::mismatch(&expected, &found, format!("replacement at {pos}")));
    }
    let mut out = e.clone();
    let mut cur = &mut out;
    for &i in &pos.0 {
        cur = match cur {
            Term::App(app) => &mut app.args[i],
            Term::Let(bs, body) => {
                if i < bs.len() {
                    &mut bs[i].1
                } else {
                    body
                }
            }
            Term::Quant(_, _, body) => body,
            _ => unreachable!("position validated above"),
        };
    }
    *cur = Term::Value(v);
    Ok(out)
}
