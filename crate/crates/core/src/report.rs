//! Run reports: a stream of events, kept in memory and optionally written
//! as JSON lines and/or human-readable text.

use std::io::Write;
use std::sync::Mutex;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum Event {
    /// One backend query of the satisfiability loop.
    BackendCheck { iteration: usize, verdict: String },
    OracleCall {
        interface: String,
        inputs: Vec<String>,
        outputs: Vec<String>,
        cached: bool,
        millis: u64,
    },
    /// The solver omitted a symbol, which was given its default value.
    IncompleteModel { symbol: String },
    ConsistencyCheck { iteration: usize, consistent: bool, new_assumptions: usize },
    SmtoResult { verdict: String, iterations: usize, assumptions: Vec<String> },
    Candidate { iteration: usize, definitions: Vec<String> },
    Verification { iteration: usize, verdict: String },
    Counterexample { iteration: usize, values: Vec<(String, String)> },
    Store { iteration: usize, constraints: usize, assumptions: usize },
    SymoResult { outcome: String, iterations: usize },
}

impl Event {
    fn text(&self) -> String {
        match self {
            Event::BackendCheck { iteration, verdict } => format!("[smto {iteration}] backend: {verdict}"),
            Event::OracleCall {
                interface,
                inputs,
                outputs,
                cached,
                millis,
            } => format!(
                "oracle {interface}({}) = {}{}",
                inputs.join(", "),
                outputs.join(" "),
                if *cached {
                    " (memo)".to_string()
                } else {
                    format!(" ({millis} ms)")
                }
            ),
            Event::IncompleteModel { symbol } => format!("model omits {symbol}; using the default value"),
            Event::ConsistencyCheck {
                iteration,
                consistent,
                new_assumptions,
            } => format!("[smto {iteration}] consistent: {consistent}, new assumptions: {new_assumptions}"),
            Event::SmtoResult {
                verdict,
                iterations,
                assumptions,
            } => format!("smto: {verdict} after {iterations} iterations, {} assumptions", assumptions.len()),
            Event::Candidate { iteration, definitions } => {
                format!("[symo {iteration}] candidate {}", definitions.join(" "))
            }
            Event::Verification { iteration, verdict } => format!("[symo {iteration}] verification: {verdict}"),
            Event::Counterexample { iteration, values } => {
                let shown: Vec<String> = values.iter().map(|(x, v)| format!("{x} = {v}")).collect();
                format!("[symo {iteration}] counterexample {}", shown.join(", "))
            }
            Event::Store {
                iteration,
                constraints,
                assumptions,
            } => format!("[symo {iteration}] |S| = {constraints}, |A| = {assumptions}"),
            Event::SymoResult { outcome, iterations } => format!("symo: {outcome} after {iterations} iterations"),
        }
    }
}

#[derive(Default)]
pub struct Reporter {
    events: Mutex<Vec<Event>>,
    json: Mutex<Option<Box<dyn Write + Send>>>,
    verbose: bool,
}

impl std::fmt::Debug for Reporter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Reporter").field("verbose", &self.verbose).finish_non_exhaustive()
    }
}

impl Reporter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Also writes every event as one JSON object per line to `sink`.
    pub fn with_json(self, sink: Box<dyn Write + Send>) -> Self {
        *self.json.lock().expect("report lock") = Some(sink);
        self
    }

    /// Also prints every event as text on stderr.
    pub fn verbose(mut self, on: bool) -> Self {
        self.verbose = on;
        self
    }

    pub fn emit(&self, event: Event) {
        if self.verbose {
            eprintln!("{}", event.text());
        }
        if let Some(sink) = self.json.lock().expect("report lock").as_mut() {
            if let Ok(line) = serde_json::to_string(&event) {
                let _ = writeln!(sink, "{line}");
                let _ = sink.flush();
            }
        }
        self.events.lock().expect("report lock").push(event);
    }

    pub fn events(&self) -> Vec<Event> {
        self.events.lock().expect("report lock").clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[derive(Clone, Default)]
    struct Shared(Arc<Mutex<Vec<u8>>>);

    impl Write for Shared {
        fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
            self.0.lock().unwrap().extend_from_slice(buf);
            Ok(buf.len())
        }
        fn flush(&mut self) -> std::io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn json_lines() {
        let sink = Shared::default();
        let r = Reporter::new().with_json(Box::new(sink.clone()));
        r.emit(Event::BackendCheck {
            iteration: 1,
            verdict: "sat".into(),
        });
        r.emit(Event::IncompleteModel { symbol: "b".into() });
        let text = String::from_utf8(sink.0.lock().unwrap().clone()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(v["event"], "backend-check");
        assert_eq!(v["verdict"], "sat");
        assert_eq!(r.events().len(), 2);
    }
}
