//! The common oracle interfaces, instantiated for a target of any rank.

use std::path::PathBuf;

use thiserror::Error;

use crate::oracle::OracleInterface;
use crate::session::EngineError;
use crate::term::{Sort, SymbolKind, Term, TermError};

/// Template names, each with its short alias.
pub const TEMPLATES: [(&str, &str); 9] = [
    ("membership", "mem"),
    ("io", "io"),
    ("neg_witness", "neg"),
    ("pos_witness", "pos"),
    ("implication", "imp"),
    ("counterexample", "cex"),
    ("distinguishing_input", "di"),
    ("correctness", "corr"),
    ("correctness_with_cex", "ccex"),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("unknown interface template {0}")]
    UnknownTemplate(String),
    #[error("template {template}: {detail}")]
    RankMismatch { template: String, detail: String },
    #[error("template {template} needs {what}")]
    MissingBinding { template: String, what: String },
}

impl From<TemplateError> for EngineError {
    fn from(e: TemplateError) -> Self {
        EngineError::Unsupported(e.to_string())
    }
}

/// What a template is instantiated with.
#[derive(Debug, Clone)]
pub struct TemplateBinding {
    pub target: String,
    pub domain: Vec<Sort>,
    pub codomain: Sort,
    pub executable: PathBuf,
    /// The specification variables and body, for the counterexample templates.
    pub spec: Option<(Vec<(String, Sort)>, Term)>,
    /// Oracle symbol defined by the correctness templates; defaults to
    /// `correct_<target>`.
    pub oracle_symbol: Option<String>,
    /// Interface name; defaults to the template name.
    pub name: Option<String>,
}

impl TemplateBinding {
    pub fn new(target: impl Into<String>, domain: Vec<Sort>, codomain: Sort, executable: impl Into<PathBuf>) -> Self {
        TemplateBinding {
            target: target.into(),
            domain,
            codomain,
            executable: executable.into(),
            spec: None,
            oracle_symbol: None,
            name: None,
        }
    }

    pub fn with_spec(mut self, variables: Vec<(String, Sort)>, body: Term) -> Self {
        self.spec = Some((variables, body));
        self
    }

    pub fn with_oracle_symbol(mut self, theta: impl Into<String>) -> Self {
        self.oracle_symbol = Some(theta.into());
        self
    }

    fn fn_sort(&self) -> Sort {
        Sort::Fn(self.domain.clone(), Box::new(self.codomain.clone()))
    }

    fn apply(&self, args: Vec<Term>) -> Term {
        Term::ordinary(self.target.clone(), args, self.codomain.clone())
    }
}

fn vars(prefix: &str, sorts: &[Sort]) -> Vec<(String, Sort)> {
    sorts
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("{prefix}{}", i + 1), s.clone()))
        .collect()
}

fn as_terms(vs: &[(String, Sort)]) -> Vec<Term> {
    vs.iter().map(|(x, s)| Term::var(x.clone(), s.clone())).collect()
}

fn fresh(base: &str, taken: &[(String, Sort)]) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while taken.iter().any(|(x, _)| *x == name) {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// Builds the interface `template` for the bound target. The correctness
/// templates define an oracle symbol; all others generate constraints only.
pub fn standard_interface(template: &str, b: &TemplateBinding) -> Result<OracleInterface, EngineError> {
    let (canonical, _) = TEMPLATES
        .iter()
        .find(|(long, short)| *long == template || *short == template)
        .ok_or_else(|| TemplateError::UnknownTemplate(template.to_string()))?;
    let rank_error = |detail: String| TemplateError::RankMismatch {
        template: canonical.to_string(),
        detail,
    };
    if b.domain.is_empty() {
        return Err(rank_error(format!("{} must take at least one argument", b.target)).into());
    }
    let needs_bool = matches!(*canonical, "implication");
    if needs_bool && b.codomain != Sort::Bool {
        return Err(rank_error(format!("{} must be a predicate", b.target)).into());
    }
    let spec = || -> Result<&(Vec<(String, Sort)>, Term), EngineError> {
        let s = b.spec.as_ref().ok_or_else(|| TemplateError::MissingBinding {
            template: canonical.to_string(),
            what: "a specification".into(),
        })?;
        let mut bad = None;
        s.1.visit_apps(&mut |app| {
            if app.symbol.kind == SymbolKind::Ordinary
                && app.symbol.name == b.target
                && !app.args.is_empty()
                && app.args.len() != b.domain.len()
            {
                bad = Some(app.args.len());
            }
        });
        if let Some(n) = bad {
            return Err(rank_error(format!(
                "specification applies {} to {n} arguments, expected {}",
                b.target,
                b.domain.len()
            ))
            .into());
        }
        Ok(s)
    };
    let candidate = vec![(b.target.clone(), b.fn_sort())];
    let zs = vars("z", &b.domain);
    let eq = |l: Term, r: Term| -> Result<Term, TermError> { Term::eq(l, r) };
    let (query, response, assumption, constraint) = match *canonical {
        "membership" => {
            let mut q = vars("y", &b.domain);
            let y = fresh("y", &q);
            q.push((y.clone(), b.codomain.clone()));
            let app = b.apply(as_terms(&q[..b.domain.len()]));
            let beta = eq(Term::var("zb", Sort::Bool), eq(app, Term::var(y, b.codomain.clone()))?)?;
            (q, vec![("zb".to_string(), Sort::Bool)], None, Some(beta))
        }
        "io" => {
            let q = vars("y", &b.domain);
            let z = fresh("z", &q);
            let beta = eq(b.apply(as_terms(&q)), Term::var(z.clone(), b.codomain.clone()))?;
            (q, vec![(z, b.codomain.clone())], None, Some(beta))
        }
        "neg_witness" | "pos_witness" => {
            let mut r = zs.clone();
            let z = fresh("z", &r);
            r.push((z.clone(), b.codomain.clone()));
            let same = eq(b.apply(as_terms(&zs)), Term::var(z, b.codomain.clone()))?;
            let beta = if *canonical == "pos_witness" { same } else { Term::not(same) };
            (Vec::new(), r, None, Some(beta))
        }
        "implication" => {
            let primed = vars("w", &b.domain);
            let beta = Term::theory("=>", vec![b.apply(as_terms(&zs)), b.apply(as_terms(&primed))])?;
            (candidate, [zs.clone(), primed].concat(), None, Some(beta))
        }
        "counterexample" => {
            let (xs, phi) = spec()?;
            (candidate, xs.clone(), None, Some(phi.clone()))
        }
        "distinguishing_input" => {
            let mut r = zs.clone();
            let z = fresh("z", &r);
            r.push((z.clone(), b.codomain.clone()));
            let beta = eq(b.apply(as_terms(&zs)), Term::var(z, b.codomain.clone()))?;
            (candidate, r, None, Some(beta))
        }
        "correctness" | "correctness_with_cex" => {
            let theta = b.oracle_symbol.clone().unwrap_or_else(|| format!("correct_{}", b.target));
            let (mut r, beta) = if *canonical == "correctness_with_cex" {
                let (xs, phi) = spec()?;
                (xs.clone(), Some(phi.clone()))
            } else {
                (Vec::new(), None)
            };
            let zb = fresh("zb", &r);
            r.insert(0, (zb.clone(), Sort::Bool));
            let alpha = eq(
                Term::oracle(theta, vec![Term::var(b.target.clone(), b.fn_sort())], Sort::Bool),
                Term::var(zb, Sort::Bool),
            )?;
            (candidate, r, Some(alpha), beta)
        }
        _ => unreachable!("template table is exhaustive"),
    };
    let name = b.name.clone().unwrap_or_else(|| canonical.to_string());
    OracleInterface::new(name, query, response, assumption, constraint, b.executable.clone())
        .map_err(EngineError::Unsupported)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::print_term;
    use crate::oracle::InterfaceKind;

    fn binary_predicate() -> TemplateBinding {
        TemplateBinding::new("inv", vec![Sort::Int, Sort::Int], Sort::Bool, "./oracle")
    }

    #[test]
    fn implication_generalizes_to_the_target_rank() {
        let i = standard_interface("implication", &binary_predicate()).unwrap();
        assert_eq!(print_term(i.constraint.as_ref().unwrap()), "(=> (inv z1 z2) (inv w1 w2))");
        assert_eq!(i.query.len(), 1);
        assert!(i.query[0].1.is_function());
        assert_eq!(i.response.len(), 4);
    }

    #[test]
    fn positive_witness_has_no_query() {
        let i = standard_interface("pos", &binary_predicate()).unwrap();
        assert!(i.query.is_empty());
        assert_eq!(print_term(i.constraint.as_ref().unwrap()), "(= (inv z1 z2) z)");
        let (_, beta) = i
            .instantiate(&[], &[crate::term::Value::int(0), crate::term::Value::int(0), crate::term::Value::Bool(true)])
            .unwrap();
        assert_eq!(print_term(&beta.unwrap()), "(= (inv 0 0) true)");
    }

    #[test]
    fn correctness_with_cex_is_definitional() {
        let x = Term::var("x", Sort::Int);
        let phi = Term::theory(">=", vec![Term::ordinary("f", vec![x.clone()], Sort::Int), x]).unwrap();
        let b = TemplateBinding::new("f", vec![Sort::Int], Sort::Int, "./ccex")
            .with_spec(vec![("x".into(), Sort::Int)], phi)
            .with_oracle_symbol("theta");
        let i = standard_interface("correctness_with_cex", &b).unwrap();
        assert!(matches!(i.kind(), InterfaceKind::Definitional { symbol, response: 0 } if symbol == "theta"));
        assert_eq!(print_term(i.assumption.as_ref().unwrap()), "(= (theta f) zb)");
        assert_eq!(print_term(i.constraint.as_ref().unwrap()), "(>= (f x) x)");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            standard_interface("telepathy", &binary_predicate()),
            Err(EngineError::Unsupported(m)) if m.contains("unknown")
        ));
        let f = TemplateBinding::new("f", vec![Sort::Int], Sort::Int, "./o");
        assert!(standard_interface("implication", &f).is_err());
        let x = Term::var("x", Sort::Int);
        let wrong = Term::eq(Term::ordinary("f", vec![x.clone(), x.clone()], Sort::Int), x).unwrap();
        let f = f.with_spec(vec![("x".into(), Sort::Int)], wrong);
        assert!(matches!(standard_interface("cex", &f), Err(EngineError::Unsupported(m)) if m.contains("2 arguments")));
    }

    #[test]
    fn every_template_builds() {
        let x = Term::var("x", Sort::Int);
        let phi = Term::ordinary("p", vec![x], Sort::Bool);
        let b = TemplateBinding::new("p", vec![Sort::Int], Sort::Bool, "./o").with_spec(vec![("x".into(), Sort::Int)], phi);
        for (long, short) in TEMPLATES {
            let a = standard_interface(long, &b).unwrap();
            let c = standard_interface(short, &b).unwrap();
            assert_eq!(a, c);
            let definitional = a.defined_symbol().is_some();
            assert_eq!(definitional, long.starts_with("correctness"), "{long}");
        }
    }
}
