//! Satisfiability and synthesis modulo oracles.
//!
//! The crate is organised bottom-up:
//!
//! * [`term`]: sorted terms, substitution and partial evaluation.
//! * [`frontend`]: the SMT-LIB / SyGuS-IF input language extended with oracle
//!   declarations, plus the concrete-syntax printer.
//! * [`oracle`]: oracle interfaces, the process protocol used to query oracle
//!   executables, and the assumption store.
//! * [`backend`]: a client for an external SMT-LIB solver.
//! * [`smto`]: the satisfiability-modulo-oracles loop for definitional problems.
//! * [`synth`]: the synthesis step (grammar enumeration or an external SyGuS solver).
//! * [`symo`]: the synthesis-modulo-oracles loop and the standard interface templates.

pub mod backend;
pub mod frontend;
pub mod oracle;
mod process;
pub mod report;
pub mod session;
pub mod smto;
pub mod symo;
pub mod synth;
pub mod term;

pub use session::{EngineError, Limits, Session};
