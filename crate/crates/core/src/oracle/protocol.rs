//! Wire format: each input is one command-line argument in SMT-LIB value
//! syntax (functions as a `define-fun` named after the query variable); the
//! oracle prints one SMT-LIB value per response variable on stdout.

use super::{OracleError, OracleInterface};
use crate::frontend::{print_lambda_as_define_fun, print_value, sexp::parse_sexps, Env};
use crate::term::Value;

pub fn encode_inputs(iface: &OracleInterface, inputs: &[Value]) -> Result<Vec<String>, OracleError> {
    if inputs.len() != iface.query.len() {
        return Err(OracleError::BadQuery {
            oracle: iface.name.clone(),
            message: format!("expected {} inputs, got {}", iface.query.len(), inputs.len()),
        });
    }
    iface
        .query
        .iter()
        .zip(inputs)
        .map(|((y, sort), v)| {
            if v.sort() != *sort {
                return Err(OracleError::BadQuery {
                    oracle: iface.name.clone(),
                    message: format!("input {y} has sort {}, expected {sort}", v.sort()),
                });
            }
            Ok(match v {
                Value::Lambda(l) => print_lambda_as_define_fun(y, l),
                _ => print_value(v),
            })
        })
        .collect()
}

pub fn decode_response(iface: &OracleInterface, stdout: &str) -> Result<Vec<Value>, OracleError> {
    let malformed = |message: String| OracleError::MalformedResponse {
        oracle: iface.name.clone(),
        message,
    };
    let sexps = parse_sexps(stdout).map_err(|e| malformed(e.to_string()))?;
    if sexps.len() != iface.response.len() {
        return Err(malformed(format!(
            "expected {} values, got {}: {:?}",
            iface.response.len(),
            sexps.len(),
            stdout.trim()
        )));
    }
    let env = Env::default();
    sexps
        .iter()
        .zip(&iface.response)
        .map(|(s, (z, sort))| {
            crate::frontend::value_from_sexp(s, sort, &env).map_err(|e| malformed(format!("{z}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Lambda, Sort, Term};

    fn iface(query: Vec<(String, Sort)>, response: Vec<(String, Sort)>) -> OracleInterface {
        OracleInterface::new("t", query, response, None, None, "./t").unwrap()
    }

    #[test]
    fn encodes_values_and_functions() {
        let fsort = Sort::function(vec![Sort::Int], Sort::Int).unwrap();
        let i = iface(vec![("n".into(), Sort::Int), ("g".into(), fsort)], vec![]);
        let lambda = Value::Lambda(Lambda {
            params: vec![("x".into(), Sort::Int)],
            body: Box::new(Term::theory("+", vec![Term::var("x", Sort::Int), Term::int(1)]).unwrap()),
        });
        let args = encode_inputs(&i, &[Value::int(-3), lambda]).unwrap();
        assert_eq!(args, vec!["(- 3)", "(define-fun g ((x Int)) Int (+ x 1))"]);
        assert!(matches!(
            encode_inputs(&i, &[Value::Bool(true)]),
            Err(OracleError::BadQuery { .. })
        ));
    }

    #[test]
    fn decodes_whitespace_separated_values() {
        let i = iface(vec![], vec![("b".into(), Sort::Bool), ("c".into(), Sort::Int)]);
        assert_eq!(
            decode_response(&i, "false\n(- 4)\n").unwrap(),
            vec![Value::Bool(false), Value::int(-4)]
        );
        assert!(matches!(
            decode_response(&i, "true"),
            Err(OracleError::MalformedResponse { .. })
        ));
        assert!(matches!(
            decode_response(&i, "1 2"),
            Err(OracleError::MalformedResponse { .. })
        ));
    }
}
