//! Deterministic oracles for tests and demos.
//!
//! Usage: `delphi-stub-oracle MODE [FILE] ARGS...` where ARGS are the
//! values passed by the solver. Modes:
//!
//! * `isprime N`, `issquare N`, `istriangle N`
//! * `table FILE ARGS`: whitespace-separated rows of inputs followed by the output
//! * `eval FILE ARGS`: value of the reference function `ref` defined in FILE
//! * `member FILE ARGS Y`: whether `ref(ARGS) = Y`
//! * `ccex FILE CANDIDATE`: checks `spec` over the integer box given by
//!   `(range lo hi)`; answers `true lo..` or `false` followed by the least
//!   failing point
//! * `ice-corr`, `ice-pos`, `ice-neg`, `ice-impl FILE CANDIDATE`: witnesses
//!   for an invariant of the one-variable system `init`/`trans`/`prop`
//!   explored inside `(range lo hi)`

use std::collections::BTreeSet;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use delphi_core::frontend::sexp::{parse_sexps, Sexp, SexpKind};
use delphi_core::frontend::{parse_definitions, parse_sort, parse_value, print_value, sorted_vars, Env};
use delphi_core::term::{apply_definitions, partial_evaluate, substitute, Binding, FunDef, FunctionTable, Sort, Term, Value};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(out) => {
            println!("{}", out.join(" "));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("delphi-stub-oracle: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: &[String]) -> Result<Vec<String>> {
    let (mode, rest) = args.split_first().ok_or_else(|| anyhow!("missing mode"))?;
    match mode.as_str() {
        "isprime" | "issquare" | "istriangle" => {
            let [n] = rest else { bail!("{mode} takes one integer") };
            let n = int_arg(n)?;
            let answer = match mode.as_str() {
                "isprime" => is_prime(n),
                "issquare" => is_square(n),
                _ => is_triangle(n),
            };
            Ok(vec![answer.to_string()])
        }
        "table" => {
            let (file, inputs) = rest.split_first().ok_or_else(|| anyhow!("table needs a file"))?;
            Ok(vec![lookup_table(&read(file)?, inputs)?])
        }
        "eval" | "member" => {
            let (file, values) = rest.split_first().ok_or_else(|| anyhow!("{mode} needs a file"))?;
            let model = Model::load(file)?;
            let r = model.def("ref")?;
            let n = r.params.len();
            let (inputs, expected) = if mode == "eval" {
                (values, None)
            } else {
                let (y, inputs) = values.split_last().ok_or_else(|| anyhow!("member needs an output value"))?;
                (inputs, Some(parse_value(y, &r.codomain)?))
            };
            if inputs.len() != n {
                bail!("ref takes {n} arguments, got {}", inputs.len());
            }
            let inputs: Vec<Value> = inputs
                .iter()
                .zip(&r.params)
                .map(|(a, (_, s))| parse_value(a, s))
                .collect::<std::result::Result<_, _>>()?;
            let out = model.call("ref", &inputs)?;
            Ok(vec![match expected {
                None => print_value(&out),
                Some(y) => (out == y).to_string(),
            }])
        }
        "ccex" => {
            let [file, candidate] = rest else { bail!("ccex takes a file and a candidate") };
            let mut model = Model::load(file)?;
            model.add_candidate(candidate)?;
            let spec = model.def("spec")?.clone();
            let (lo, hi) = model.range()?;
            let points = box_points(spec.params.len(), lo, hi);
            for p in &points {
                if !model.holds("spec", p)? {
                    let mut out = vec!["false".to_string()];
                    out.extend(p.iter().map(print_value));
                    return Ok(out);
                }
            }
            let mut out = vec!["true".to_string()];
            out.extend(std::iter::repeat(print_value(&Value::int(lo))).take(spec.params.len()));
            Ok(out)
        }
        "ice-corr" | "ice-pos" | "ice-neg" | "ice-impl" => {
            let [file, candidate] = rest else { bail!("{mode} takes a file and a candidate") };
            let mut model = Model::load(file)?;
            let inv = model.add_candidate(candidate)?;
            ice(&model, &inv, mode)
        }
        other => bail!("unknown mode {other}"),
    }
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

fn int_arg(text: &str) -> Result<i128> {
    let v = parse_value(text, &Sort::Int)?;
    let n = v.as_int().ok_or_else(|| anyhow!("not an integer: {text}"))?;
    i128::try_from(n.clone()).map_err(|_| anyhow!("integer out of range: {text}"))
}

fn is_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn isqrt(n: i128) -> i128 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn is_square(n: i128) -> bool {
    n >= 0 && isqrt(n).pow(2) == n
}

fn is_triangle(n: i128) -> bool {
    n >= 0 && is_square(8 * n + 1)
}

fn lookup_table(text: &str, inputs: &[String]) -> Result<String> {
    for line in text.lines() {
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.is_empty() || row[0].starts_with(';') {
            continue;
        }
        let (out, ins) = row.split_last().expect("row is not empty");
        if ins.len() == inputs.len() && ins.iter().zip(inputs).all(|(a, b)| a == b) {
            return Ok(out.to_string());
        }
    }
    bail!("no table row for {}", inputs.join(" "))
}

/// Definitions, declarations and a range read from a stub data file.
struct Model {
    env: Env,
    defs: FunctionTable,
    range: Option<(i64, i64)>,
}

impl Model {
    fn load(path: &str) -> Result<Model> {
        let mut m = Model {
            env: Env::default(),
            defs: FunctionTable::new(),
            range: None,
        };
        for cmd in parse_sexps(&read(path)?)? {
            let items = cmd.list().ok_or_else(|| anyhow!("{path}: expected a command"))?;
            match items.first().and_then(Sexp::symbol) {
                Some("declare-fun") if items.len() == 4 => {
                    let name = items[1].symbol().ok_or_else(|| anyhow!("bad declare-fun"))?;
                    let domain = items[2]
                        .list()
                        .ok_or_else(|| anyhow!("bad declare-fun"))?
                        .iter()
                        .map(parse_sort)
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    let sig = delphi_core::term::FunSig::new(domain, parse_sort(&items[3])?);
                    m.env.ordinary.insert(name.to_string(), sig);
                }
                Some("define-fun") if items.len() == 5 => {
                    let name = items[1].symbol().ok_or_else(|| anyhow!("bad define-fun"))?;
                    let mut params = sorted_vars(&items[2])?;
                    let body = m.env.term(&items[4], &mut params)?;
                    let def = FunDef::new(name, params, body);
                    m.env.ordinary.insert(name.to_string(), def.sig());
                    m.defs.insert(name.to_string(), def);
                }
                Some("range") if items.len() == 3 => m.range = Some((int_sexp(&items[1])?, int_sexp(&items[2])?)),
                _ => bail!("{path}:{}: unrecognised command", cmd.line),
            }
        }
        Ok(m)
    }

    fn def(&self, name: &str) -> Result<&FunDef> {
        self.defs.get(name).ok_or_else(|| anyhow!("no definition of {name}"))
    }

    fn range(&self) -> Result<(i64, i64)> {
        self.range.ok_or_else(|| anyhow!("no range given"))
    }

    /// Installs the candidate under its own name and returns that name.
    fn add_candidate(&mut self, text: &str) -> Result<String> {
        let defs = parse_definitions(text, &Env::default())?;
        let [def] = defs.as_slice() else { bail!("expected one define-fun, got {}", defs.len()) };
        self.defs.insert(def.name.clone(), def.clone());
        Ok(def.name.clone())
    }

    fn call(&self, name: &str, args: &[Value]) -> Result<Value> {
        let def = self.def(name)?;
        let binding: Binding = def
            .params
            .iter()
            .zip(args)
            .map(|((x, _), v)| (x.clone(), Term::Value(v.clone())))
            .collect();
        let body = substitute(&def.body, &binding)?;
        let t = partial_evaluate(&apply_definitions(&body, &self.defs)?)?;
        t.as_value().cloned().ok_or_else(|| anyhow!("{name} did not evaluate to a value"))
    }

    fn holds(&self, name: &str, args: &[Value]) -> Result<bool> {
        self.call(name, args)?.as_bool().ok_or_else(|| anyhow!("{name} is not a predicate"))
    }
}

fn int_sexp(s: &Sexp) -> Result<i64> {
    match &s.kind {
        SexpKind::Numeral(n) | SexpKind::Symbol(n) => Ok(n.parse()?),
        SexpKind::List(items) if items.len() == 2 && items[0].is_symbol("-") => Ok(-int_sexp(&items[1])?),
        _ => bail!("expected an integer"),
    }
}

/// All integer points of `[lo, hi]^n` in lexicographic order.
fn box_points(n: usize, lo: i64, hi: i64) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(Value::int(v));
                    q
                })
            })
            .collect();
    }
    out
}

fn ice(model: &Model, inv: &str, mode: &str) -> Result<Vec<String>> {
    let (lo, hi) = model.range()?;
    let states: Vec<Value> = (lo..=hi).map(Value::int).collect();
    let mut reach = BTreeSet::new();
    let mut frontier: Vec<Value> = Vec::new();
    for s in &states {
        if model.holds("init", std::slice::from_ref(s))? {
            reach.insert(s.clone());
            frontier.push(s.clone());
        }
    }
    let mut edges = Vec::new();
    for s in &states {
        for t in &states {
            if model.holds("trans", &[s.clone(), t.clone()])? {
                edges.push((s.clone(), t.clone()));
            }
        }
    }
    while let Some(s) = frontier.pop() {
        for (_, t) in edges.iter().filter(|(a, _)| *a == s) {
            if reach.insert(t.clone()) {
                frontier.push(t.clone());
            }
        }
    }
    let in_inv = |s: &Value| model.holds(inv, std::slice::from_ref(s));
    let show = |v: &[&Value]| v.iter().map(|x| print_value(x)).collect::<Vec<_>>();
    match mode {
        "ice-pos" => {
            for s in &reach {
                if !in_inv(s)? {
                    return Ok(show(&[s]));
                }
            }
            let s = reach.iter().next().ok_or_else(|| anyhow!("no initial state in range"))?;
            Ok(show(&[s]))
        }
        "ice-neg" => {
            let mut bad = None;
            for s in &states {
                if !model.holds("prop", std::slice::from_ref(s))? {
                    if in_inv(s)? {
                        return Ok(show(&[s]));
                    }
                    bad.get_or_insert(s);
                }
            }
            let s = bad.ok_or_else(|| anyhow!("no unsafe state in range"))?;
            Ok(show(&[s]))
        }
        "ice-impl" => {
            for (s, t) in &edges {
                if in_inv(s)? && !in_inv(t)? {
                    return Ok(show(&[s, t]));
                }
            }
            Ok(show(&[&states[0], &states[0]]))
        }
        _ => {
            let mut ok = true;
            for s in &states {
                let i = in_inv(s)?;
                if (reach.contains(s) && !i) || (i && !model.holds("prop", std::slice::from_ref(s))?) {
                    ok = false;
                }
            }
            for (s, t) in &edges {
                if in_inv(s)? && !in_inv(t)? {
                    ok = false;
                }
            }
            Ok(vec![ok.to_string()])
        }
    }
}
