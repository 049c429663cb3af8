//! Oracle interfaces, the assumption store, and the process runtime that
//! queries oracle executables.

mod protocol;
mod runtime;
mod store;

use std::path::PathBuf;
use std::time::Duration;

use thiserror::Error;

pub use protocol::{decode_response, encode_inputs};
pub use runtime::{CallOutcome, OracleCallRecord, OracleRuntime, DEFAULT_TIMEOUT, SEED_VARIABLE};
pub use store::AssumptionSet;

use crate::term::{partial_evaluate, substitute, Binding, Sort, SymbolKind, Term, TermError, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("oracle {oracle} could not be started: {message}")]
    Spawn { oracle: String, message: String },
    #[error("oracle {oracle} exited with {status}: {stderr}")]
    Crash { oracle: String, status: String, stderr: String },
    #[error("oracle {oracle} did not answer within {seconds:.1}s")]
    Timeout { oracle: String, seconds: f64 },
    #[error("oracle {oracle} gave a malformed response: {message}")]
    MalformedResponse { oracle: String, message: String },
    #[error("oracle {oracle} answered {fresh} for ({inputs}) but earlier answered {cached}")]
    FunctionalViolation {
        oracle: String,
        inputs: String,
        cached: String,
        fresh: String,
    },
    #[error("query to oracle {oracle} is ill-sorted: {message}")]
    BadQuery { oracle: String, message: String },
}

/// How an interface relates to the oracle symbols of a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterfaceKind {
    /// The assumption generator is `θ(y1, ..., yn) = z`: the interface defines `θ`.
    Definitional { symbol: String, response: usize },
    /// No defining assumption; the interface contributes constraints only.
    Free,
}

/// An oracle interface: query variables, response variables, optional
/// assumption and constraint generators, and the bound executable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleInterface {
    pub name: String,
    pub query: Vec<(String, Sort)>,
    pub response: Vec<(String, Sort)>,
    pub assumption: Option<Term>,
    pub constraint: Option<Term>,
    pub executable: PathBuf,
    kind: InterfaceKind,
}

impl OracleInterface {
    pub fn new(
        name: impl Into<String>,
        query: Vec<(String, Sort)>,
        response: Vec<(String, Sort)>,
        assumption: Option<Term>,
        constraint: Option<Term>,
        executable: impl Into<PathBuf>,
    ) -> Result<OracleInterface, String> {
        let name = name.into();
        for (label, generator) in [("assumption", &assumption), ("constraint", &constraint)] {
            let Some(g) = generator else { continue };
            if g.sort() != Sort::Bool {
                return Err(format!("{label} generator of {name} must be Bool"));
            }
            for v in g.free_vars() {
                if !query.iter().chain(&response).any(|(x, _)| *x == v) {
                    return Err(format!("{label} generator of {name} mentions {v}, which is neither a query nor a response variable"));
                }
            }
        }
        let kind = assumption
            .as_ref()
            .and_then(|a| definitional_shape(a, &query, &response))
            .unwrap_or(InterfaceKind::Free);
        Ok(OracleInterface {
            name,
            query,
            response,
            assumption,
            constraint,
            executable: executable.into(),
            kind,
        })
    }

    pub fn kind(&self) -> &InterfaceKind {
        &self.kind
    }

    /// The oracle symbol this interface defines, if it is definitional.
    pub fn defined_symbol(&self) -> Option<&str> {
        match &self.kind {
            InterfaceKind::Definitional { symbol, .. } => Some(symbol),
            InterfaceKind::Free => None,
        }
    }

    /// Index of the response variable that carries `θ(ȳ)`.
    pub fn defining_response(&self) -> Option<usize> {
        match &self.kind {
            InterfaceKind::Definitional { response, .. } => Some(*response),
            InterfaceKind::Free => None,
        }
    }

    pub fn query_sorts(&self) -> Vec<Sort> {
        self.query.iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn response_sorts(&self) -> Vec<Sort> {
        self.response.iter().map(|(_, s)| s.clone()).collect()
    }

    /// `α·{ȳ→c̄, z̄→d̄}` and `β·{ȳ→c̄, z̄→d̄}`, each partially evaluated.
    pub fn instantiate(&self, inputs: &[Value], outputs: &[Value]) -> Result<(Option<Term>, Option<Term>), TermError> {
        if inputs.len() != self.query.len() || outputs.len() != self.response.len() {
            return Err(TermError::IllFormed(format!(
                "interface {} expects {} inputs and {} outputs",
                self.name,
                self.query.len(),
                self.response.len()
            )));
        }
        let binding: Binding = self
            .query
            .iter()
            .zip(inputs)
            .chain(self.response.iter().zip(outputs))
            .map(|((x, _), v)| (x.clone(), Term::Value(v.clone())))
            .collect();
        let inst = |g: &Option<Term>| -> Result<Option<Term>, TermError> {
            g.as_ref()
                .map(|g| partial_evaluate(&substitute(g, &binding)?))
                .transpose()
        };
        Ok((inst(&self.assumption)?, inst(&self.constraint)?))
    }
}

fn definitional_shape(a: &Term, query: &[(String, Sort)], response: &[(String, Sort)]) -> Option<InterfaceKind> {
    let Term::App(eq) = a else { return None };
    if eq.symbol.kind != SymbolKind::Theory || eq.symbol.name != "=" || eq.args.len() != 2 {
        return None;
    }
    let shape = |lhs: &Term, rhs: &Term| -> Option<InterfaceKind> {
        let Term::App(app) = lhs else { return None };
        if app.symbol.kind != SymbolKind::Oracle || app.args.len() != query.len() {
            return None;
        }
        let args_are_query = app
            .args
            .iter()
            .zip(query)
            .all(|(t, (y, _))| matches!(t, Term::Var(x, _) if x == y));
        let Term::Var(z, _) = rhs else { return None };
        let response = response.iter().position(|(r, _)| r == z)?;
        args_are_query.then(|| InterfaceKind::Definitional {
            symbol: app.symbol.name.clone(),
            response,
        })
    };
    shape(&eq.args[0], &eq.args[1]).or_else(|| shape(&eq.args[1], &eq.args[0]))
}

pub(crate) fn duration_secs(d: Duration) -> f64 {
    d.as_secs_f64()
}
