use indexmap::IndexMap;

use super::OracleError;
use crate::frontend::print_value;
use crate::term::{Term, Value};

/// Oracle-generated equalities `θ(c̄) ≈ d`, at most one per `(θ, c̄)`.
/// Insertion order is preserved so that emitted formulas are reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssumptionSet {
    entries: IndexMap<(String, Vec<Value>), Value>,
}

fn show_args(args: &[Value]) -> String {
    args.iter().map(print_value).collect::<Vec<_>>().join(" ")
}

impl AssumptionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, symbol: &str, args: &[Value]) -> Option<&Value> {
        self.entries.get(&(symbol.to_string(), args.to_vec()))
    }

    /// Adds `θ(c̄) ≈ d`. Returns whether the set grew; a different value for
    /// an existing key is a functional violation.
    pub fn insert(&mut self, symbol: &str, args: Vec<Value>, value: Value) -> Result<bool, OracleError> {
        let key = (symbol.to_string(), args);
        if let Some(old) = self.entries.get(&key) {
            if *old != value {
                return Err(OracleError::FunctionalViolation {
                    oracle: symbol.to_string(),
                    inputs: show_args(&key.1),
                    cached: print_value(old),
                    fresh: print_value(&value),
                });
            }
            return Ok(false);
        }
        self.entries.insert(key, value);
        Ok(true)
    }

    /// Adds every member of `other`, returning how many were new.
    pub fn extend(&mut self, other: &AssumptionSet) -> Result<usize, OracleError> {
        let mut added = 0;
        for ((s, args), v) in &other.entries {
            added += usize::from(self.insert(s, args.clone(), v.clone())?);
        }
        Ok(added)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[Value], &Value)> {
        self.entries.iter().map(|((s, a), v)| (s.as_str(), a.as_slice(), v))
    }

    /// The members as equality terms `(= (θ c̄) d)`.
    pub fn to_terms(&self) -> Vec<Term> {
        self.iter()
            .map(|(s, args, v)| {
                let app = Term::oracle(s, args.iter().cloned().map(Term::Value).collect(), v.sort());
                Term::eq(app, Term::Value(v.clone())).expect("value has the application's sort")
            })
            .collect()
    }

    /// The conjunction of all members (`true` when empty).
    pub fn to_formula(&self) -> Term {
        Term::and(self.to_terms())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_size() {
        let mut a = AssumptionSet::new();
        assert_eq!(a.lookup("isPrime", &[Value::int(7)]), None);
        assert!(a.insert("isPrime", vec![Value::int(7)], Value::Bool(true)).unwrap());
        assert_eq!(a.lookup("isPrime", &[Value::int(7)]), Some(&Value::Bool(true)));
        assert!(a.insert("isPrime", vec![Value::int(6)], Value::Bool(false)).unwrap());
        assert!(a.insert("isPrime", vec![Value::int(5)], Value::Bool(true)).unwrap());
        assert!(!a.insert("isPrime", vec![Value::int(5)], Value::Bool(true)).unwrap());
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn conflicting_value_is_a_violation() {
        let mut a = AssumptionSet::new();
        a.insert("t", vec![Value::int(1)], Value::int(2)).unwrap();
        let err = a.insert("t", vec![Value::int(1)], Value::int(3)).unwrap_err();
        assert!(matches!(err, OracleError::FunctionalViolation { .. }));
        assert_eq!(a.lookup("t", &[Value::int(1)]), Some(&Value::int(2)));
    }

    #[test]
    fn formula() {
        let mut a = AssumptionSet::new();
        assert!(a.to_formula().is_true());
        a.insert("isPrime", vec![Value::int(7)], Value::Bool(true)).unwrap();
        assert_eq!(crate::frontend::print_term(&a.to_formula()), "(= (isPrime 7) true)");
    }
}
