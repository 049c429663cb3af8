use std::collections::HashMap;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use super::protocol::{decode_response, encode_inputs};
use super::{OracleError, OracleInterface};
use crate::frontend::print_value;
use crate::process::{self, ProcessError};
use crate::term::Value;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// Environment variable passed to every oracle process when a seed is set.
pub const SEED_VARIABLE: &str = "DELPHI_ORACLE_SEED";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCallRecord {
    pub interface: String,
    pub inputs: Vec<Value>,
    pub outputs: Vec<Value>,
    pub wall_time: Duration,
    /// Served from the memo without spawning a process.
    pub cached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallOutcome {
    pub outputs: Vec<Value>,
    pub cached: bool,
    pub wall_time: Duration,
}

type MemoKey = (String, Vec<Value>);

/// Invokes oracle executables. Calls to definitional interfaces are
/// memoized per `(interface, inputs)`; the memo may be shared by
/// concurrent callers.
#[derive(Debug)]
pub struct OracleRuntime {
    timeout: Duration,
    seed: Option<u64>,
    memo: Mutex<HashMap<MemoKey, Vec<Value>>>,
    records: Mutex<Vec<OracleCallRecord>>,
    spawns: AtomicUsize,
}

impl Default for OracleRuntime {
    fn default() -> Self {
        Self::new()
    }
}

fn show(values: &[Value]) -> String {
    values.iter().map(print_value).collect::<Vec<_>>().join(" ")
}

impl OracleRuntime {
    pub fn new() -> Self {
        OracleRuntime {
            timeout: DEFAULT_TIMEOUT,
            seed: None,
            memo: Mutex::new(HashMap::new()),
            records: Mutex::new(Vec::new()),
            spawns: AtomicUsize::new(0),
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    /// Number of oracle processes started so far.
    pub fn spawn_count(&self) -> usize {
        self.spawns.load(Ordering::SeqCst)
    }

    /// All calls so far, in order, including memo hits.
    pub fn records(&self) -> Vec<OracleCallRecord> {
        self.records.lock().expect("records lock").clone()
    }

    pub fn record_count(&self) -> usize {
        self.records.lock().expect("records lock").len()
    }

    pub fn records_since(&self, start: usize) -> Vec<OracleCallRecord> {
        self.records.lock().expect("records lock")[start..].to_vec()
    }

    /// Queries the oracle bound to `iface` with `inputs`.
    pub fn call(&self, iface: &OracleInterface, inputs: &[Value]) -> Result<CallOutcome, OracleError> {
        let memoize = iface.defined_symbol().is_some();
        let key = (iface.name.clone(), inputs.to_vec());
        if memoize {
            if let Some(outputs) = self.memo.lock().expect("memo lock").get(&key) {
                self.record(iface, inputs, outputs.clone(), Duration::ZERO, true);
                return Ok(CallOutcome {
                    outputs: outputs.clone(),
                    cached: true,
                    wall_time: Duration::ZERO,
                });
            }
        }
        let (outputs, elapsed) = self.spawn(iface, inputs)?;
        if memoize {
            let mut memo = self.memo.lock().expect("memo lock");
            match memo.get(&key) {
                Some(existing) if *existing != outputs => {
                    return Err(OracleError::FunctionalViolation {
                        oracle: iface.name.clone(),
                        inputs: show(inputs),
                        cached: show(existing),
                        fresh: show(&outputs),
                    })
                }
                Some(_) => {}
                None => {
                    memo.insert(key, outputs.clone());
                }
            }
        }
        self.record(iface, inputs, outputs.clone(), elapsed, false);
        Ok(CallOutcome {
            outputs,
            cached: false,
            wall_time: elapsed,
        })
    }

    fn record(&self, iface: &OracleInterface, inputs: &[Value], outputs: Vec<Value>, wall_time: Duration, cached: bool) {
        self.records.lock().expect("records lock").push(OracleCallRecord {
            interface: iface.name.clone(),
            inputs: inputs.to_vec(),
            outputs,
            wall_time,
            cached,
        });
    }

    fn spawn(&self, iface: &OracleInterface, inputs: &[Value]) -> Result<(Vec<Value>, Duration), OracleError> {
        let args = encode_inputs(iface, inputs)?;
        let mut cmd = Command::new(&iface.executable);
        cmd.args(&args);
        if let Some(seed) = self.seed {
            cmd.env(SEED_VARIABLE, seed.to_string());
        }
        self.spawns.fetch_add(1, Ordering::SeqCst);
        let finished = process::run(cmd, None, Some(self.timeout)).map_err(|e| match e {
            ProcessError::Spawn(err) => OracleError::Spawn {
                oracle: iface.name.clone(),
                message: format!("{}: {err}", iface.executable.display()),
            },
            ProcessError::Timeout(t) => OracleError::Timeout {
                oracle: iface.name.clone(),
                seconds: super::duration_secs(t),
            },
        })?;
        if !finished.status.success() {
            return Err(OracleError::Crash {
                oracle: iface.name.clone(),
                status: finished.status.to_string(),
                stderr: finished.stderr.trim().to_string(),
            });
        }
        let outputs = decode_response(iface, &finished.stdout)?;
        Ok((outputs, finished.elapsed))
    }
}
