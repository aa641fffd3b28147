use std::fmt;

use crate::Rational;

/// A value recorded in a claim. Rationals render as `n` or `n/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Number(Rational),
    Bool(bool),
    /// A set of rendered points, kept sorted.
    Set(Vec<String>),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Number(Rational::from_integer(n.into()))
    }

    pub fn set(items: impl IntoIterator<Item = String>) -> Self {
        let mut items: Vec<String> = items.into_iter().collect();
        items.sort();
        items.dedup();
        Value::Set(items)
    }
}

impl From<Rational> for Value {
    fn from(value: Rational) -> Self {
        Value::Number(value)
    }
}

impl From<bool> for Value {
    fn from(value: bool) -> Self {
        Value::Bool(value)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(q) => write!(f, "{q}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Set(items) => write!(f, "{{{}}}", items.join(", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub label: String,
    /// The identity being checked, in plain notation.
    pub statement: String,
    pub computed: Value,
    /// `None` for pure evaluation requests, which always pass.
    pub expected: Option<Value>,
    pub pass: bool,
}

impl Claim {
    pub fn new(
        label: impl Into<String>,
        statement: impl Into<String>,
        computed: impl Into<Value>,
        expected: impl Into<Value>,
    ) -> Self {
        let (computed, expected) = (computed.into(), expected.into());
        Self {
            label: label.into(),
            statement: statement.into(),
            pass: computed == expected,
            computed,
            expected: Some(expected),
        }
    }

    pub fn observed(
        label: impl Into<String>,
        statement: impl Into<String>,
        computed: impl Into<Value>,
    ) -> Self {
        Self {
            label: label.into(),
            statement: statement.into(),
            computed: computed.into(),
            expected: None,
            pass: true,
        }
    }

    /// A claim that failed before producing a value.
    pub fn failed(
        label: impl Into<String>,
        statement: impl Into<String>,
        error: impl fmt::Display,
    ) -> Self {
        Self {
            label: label.into(),
            statement: format!("{}: {error}", statement.into()),
            computed: Value::Set(vec![format!("error: {error}")]),
            expected: None,
            pass: false,
        }
    }
}

/// A table of rendered cells printed with `--trace`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Free-form lines printed after the table.
    pub footer: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub scenario: String,
    pub parameters: Vec<(String, String)>,
    pub claims: Vec<Claim>,
    pub trace: Option<Trace>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            parameters: Vec::new(),
            claims: Vec::new(),
            trace: None,
            notes: Vec::new(),
        }
    }

    pub fn with_parameter(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.parameters.push((key.to_owned(), value.to_string()));
        self
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
    }

    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn claim(&self, label: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.label == label)
    }

    /// Scenario name with its parameters, e.g. `theorem23[n=3]`.
    pub fn title(&self) -> String {
        if self.parameters.is_empty() {
            return self.scenario.clone();
        }
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}[{}]", self.scenario, params.join(","))
    }
}
