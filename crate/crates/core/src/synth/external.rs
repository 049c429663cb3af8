use std::fmt::Write as _;
use std::io::Write as _;
use std::process::Command;

use super::grammar::{Grammar, Production};
use super::{Candidate, SynthTarget};
use crate::frontend::{parse_definitions, print_symbol, print_term, Env};
use crate::process;
use crate::session::EngineError;
use crate::term::Term;

/// The store as a SyGuS-IF problem over the targets.
pub fn emit_sygus(targets: &[SynthTarget], store: &[Term]) -> Result<String, EngineError> {
    let mut out = String::from("(set-logic ALL)\n");
    for t in targets {
        let params: Vec<String> = t.params.iter().map(|(x, s)| format!("({} {s})", print_symbol(x))).collect();
        let _ = write!(out, "(synth-fun {} ({}) {}", print_symbol(&t.name), params.join(" "), t.codomain);
        if let Some(g) = &t.grammar {
            out.push('\n');
            write_grammar(&mut out, g);
        }
        out.push_str(")\n");
    }
    for c in store {
        if c.contains_oracle() {
            return Err(EngineError::ExternalSolver(format!(
                "constraint {} mentions an oracle symbol",
                print_term(c)
            )));
        }
        let _ = writeln!(out, "(constraint {})", print_term(c));
    }
    out.push_str("(check-synth)\n");
    Ok(out)
}

fn write_grammar(out: &mut String, g: &Grammar) {
    let decls: Vec<String> = g
        .nonterminals
        .iter()
        .map(|(n, s)| format!("({} {s})", print_symbol(n)))
        .collect();
    let _ = writeln!(out, "  ({})", decls.join(" "));
    out.push_str("  (");
    for (i, (n, s)) in g.nonterminals.iter().enumerate() {
        let prods: Vec<String> = g.rules[i]
            .iter()
            .map(|p| match p {
                Production::Term(t) => print_term(t),
                Production::AnyConstant(s) => format!("(Constant {s})"),
                Production::AnyVariable(s) => format!("(Variable {s})"),
            })
            .collect();
        let _ = write!(out, "({} {s} ({}))", print_symbol(n), prods.join(" "));
    }
    out.push(')');
}

pub(super) fn solve(
    program: &str,
    args: &[String],
    targets: &[SynthTarget],
    store: &[Term],
) -> Result<Option<Candidate>, EngineError> {
    let text = emit_sygus(targets, store)?;
    let mut file = tempfile::Builder::new()
        .suffix(".sl")
        .tempfile()
        .map_err(|e| EngineError::ExternalSolver(e.to_string()))?;
    file.write_all(text.as_bytes())
        .map_err(|e| EngineError::ExternalSolver(e.to_string()))?;
    let mut cmd = Command::new(program);
    cmd.args(args).arg(file.path());
    let finished = process::run(cmd, None, None).map_err(|e| EngineError::ExternalSolver(format!("{program}: {e}")))?;
    let answer = finished.stdout.trim();
    match answer.split_whitespace().next() {
        Some("infeasible") | Some("unsat") => return Ok(None),
        Some("fail") | Some("unknown") | None => {
            return Err(EngineError::ExternalSolver(format!(
                "{program} gave no solution: {}",
                finished.stderr.trim()
            )))
        }
        _ => {}
    }
    let env = Env::default();
    let defs = parse_definitions(answer, &env).map_err(|e| EngineError::ExternalSolver(e.to_string()))?;
    let mut definitions = Vec::new();
    for t in targets {
        let d = defs
            .iter()
            .find(|d| d.name == t.name)
            .ok_or_else(|| EngineError::ExternalSolver(format!("no definition for {}", t.name)))?;
        if d.sig() != t.sig() {
            return Err(EngineError::ExternalSolver(format!("definition of {} has the wrong signature", t.name)));
        }
        definitions.push(d.clone());
    }
    Ok(Some(Candidate { definitions }))
}
