use thiserror::Error;

use crate::backend::{BackendConfig, BackendError};
use crate::frontend::FrontendError;
use crate::oracle::{OracleError, OracleRuntime};
use crate::report::{Event, Reporter};
use crate::synth::SynthMode;
use crate::term::TermError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Frontend(#[from] FrontendError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
    #[error("no progress: {0}")]
    InternalProgressFailure(String),
    #[error("synthesis budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("external synthesis solver failed: {0}")]
    ExternalSolver(String),
    #[error("unsupported problem: {0}")]
    Unsupported(String),
}

/// Resource bounds shared by the engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Cap on loop iterations of either engine; unlimited when `None`.
    pub max_iterations: Option<usize>,
    /// Largest candidate size (in term nodes) the enumerator will reach.
    pub max_candidate_size: usize,
    /// Cap on candidates examined by one synthesis call.
    pub max_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_iterations: None,
            max_candidate_size: 40,
            max_candidates: 2_000_000,
        }
    }
}

/// Everything the engines need to talk to the outside world.
#[derive(Debug, Default)]
pub struct Session {
    pub backend: BackendConfig,
    pub oracles: OracleRuntime,
    pub limits: Limits,
    pub synth: SynthMode,
    pub report: Reporter,
}

impl Session {
    pub fn new(backend: BackendConfig) -> Self {
        Session {
            backend,
            ..Self::default()
        }
    }

    pub(crate) fn emit(&self, event: Event) {
        self.report.emit(event);
    }
}
