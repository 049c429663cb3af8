use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use delphi_core::backend::BackendConfig;
use delphi_core::frontend::{parse_script, print_define_fun, Directive, Script};
use delphi_core::oracle::{AssumptionSet, OracleRuntime};
use delphi_core::report::Reporter;
use delphi_core::smto::{smto_solve, SmtoProblem, SmtoVerdict};
use delphi_core::symo::{print_solution, symo_solve, SymoProblem, SymoVerdict};
use delphi_core::synth::SynthMode;
use delphi_core::{EngineError, Limits, Session};

const SAT: u8 = 0;
const UNSAT: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;
const FAULT: u8 = 4;

/// Solves satisfiability and synthesis problems whose symbols are given
/// meaning by external oracle programs.
#[derive(Debug, Parser)]
#[command(name = "delphi", version)]
struct RunConfig {
    /// Problem file ending in `(check-sat)` or `(check-synth)`.
    input: PathBuf,
    /// SMT solver command line; the solver must read SMT-LIB from stdin.
    #[arg(long, default_value = "z3 -in")]
    smt_solver: String,
    /// External SyGuS solver command line; the problem file path is appended.
    #[arg(long)]
    synth_solver: Option<String>,
    /// Seconds allowed per oracle call.
    #[arg(long, default_value_t = 10.0, value_parser = positive_seconds)]
    oracle_timeout: f64,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Write the run report to this file as JSON lines.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Exported to oracles as DELPHI_ORACLE_SEED.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the run report to stderr.
    #[arg(long)]
    verbose: bool,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number of seconds, got {s}")),
    }
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { SAT });
        }
    };
    ExitCode::from(run(&config))
}

fn diagnose(message: impl std::fmt::Display, code: u8) -> u8 {
    eprintln!("delphi: error: {message}");
    code
}

fn run(config: &RunConfig) -> u8 {
    let text = match std::fs::read_to_string(&config.input) {
        Ok(t) => t,
        Err(e) => return diagnose(format_args!("{}: {e}", config.input.display()), USAGE),
    };
    let mut script = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => return diagnose(format_args!("{}:{e}", config.input.display()), USAGE),
    };
    let base = config.input.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    script.resolve_executables(base);
    let session = match session(config) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let outcome = match script.directive {
        Directive::CheckSat => check_sat(&session, &script),
        Directive::CheckSynth => check_synth(&session, &script),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => report_error(e),
    }
}

fn session(config: &RunConfig) -> Result<Session, u8> {
    let backend = BackendConfig::from_command_line(&config.smt_solver)
        .ok_or_else(|| diagnose("--smt-solver needs a command", USAGE))?;
    let synth = match &config.synth_solver {
        None => SynthMode::Builtin,
        Some(cmd) => SynthMode::from_command_line(cmd).ok_or_else(|| diagnose("--synth-solver needs a command", USAGE))?,
    };
    let mut report = Reporter::new().verbose(config.verbose);
    if let Some(path) = &config.report {
        let file = File::create(path).map_err(|e| diagnose(format_args!("{}: {e}", path.display()), USAGE))?;
        report = report.with_json(Box::new(BufWriter::new(file)));
    }
    Ok(Session {
        backend,
        oracles: OracleRuntime::new()
            .with_timeout(Duration::from_secs_f64(config.oracle_timeout))
            .with_seed(config.seed),
        limits: Limits {
            max_iterations: config.max_iterations,
            ..Limits::default()
        },
        synth,
        report,
    })
}

fn check_sat(session: &Session, script: &Script) -> Result<u8, EngineError> {
    let problem = SmtoProblem::from_script(script)?;
    let outcome = smto_solve(session, &problem, AssumptionSet::new())?;
    Ok(match outcome.verdict {
        SmtoVerdict::Sat(model) => {
            println!("sat");
            for name in script.functions.keys() {
                if let Some(def) = model.get(name) {
                    println!("{}", print_define_fun(def));
                }
            }
            SAT
        }
        SmtoVerdict::Unsat => {
            println!("unsat");
            UNSAT
        }
        SmtoVerdict::Unknown(why) => {
            println!("unknown");
            eprintln!("delphi: {why}");
            UNKNOWN
        }
    })
}

fn check_synth(session: &Session, script: &Script) -> Result<u8, EngineError> {
    let problem = SymoProblem::from_script(script)?;
    let outcome = symo_solve(session, &problem)?;
    Ok(match outcome.verdict {
        SymoVerdict::Solution(candidate) => {
            println!("{}", print_solution(&candidate));
            SAT
        }
        SymoVerdict::NoSolution => {
            println!("no-solution");
            UNSAT
        }
        SymoVerdict::Unknown(why) => {
            println!("unknown");
            eprintln!("delphi: {why}");
            UNKNOWN
        }
    })
}

fn report_error(e: EngineError) -> u8 {
    match e {
        EngineError::IterationLimit(_) | EngineError::BudgetExhausted(_) => {
            println!("unknown");
            eprintln!("delphi: {e}");
            UNKNOWN
        }
        EngineError::Frontend(_) | EngineError::Unsupported(_) => diagnose(e, USAGE),
        _ => diagnose(e, FAULT),
    }
}
