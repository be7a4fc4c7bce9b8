//! Outcome records for the relation checks.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::qpoly::{scalar_to_json, QPoly, QScalar};

/// A value compared by a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Poly(QPoly),
    Rational(QScalar),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Poly(p) => write!(f, "{p}"),
            Value::Rational(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Poly(p) => p.serialize(serializer),
            Value::Rational(x) => scalar_to_json(x).serialize(serializer),
        }
    }
}

impl From<QPoly> for Value {
    fn from(p: QPoly) -> Self {
        Value::Poly(p)
    }
}

impl From<QScalar> for Value {
    fn from(x: QScalar) -> Self {
        Value::Rational(x)
    }
}

/// The first entry at which a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// What was being compared, e.g. the two braid words.
    pub words: Vec<String>,
    /// Input state (column).
    pub u: Vec<u32>,
    /// Output state (row).
    pub v: Vec<u32>,
    pub expected: Value,
    pub actual: Value,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: entry ([{}] <- [{}]) expected {}, got {}",
            self.words.join(" vs "),
            self.v.iter().join(","),
            self.u.iter().join(","),
            self.expected,
            self.actual
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: String,
    pub passed: bool,
    /// Number of identities compared.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Mismatch>,
}

impl CheckReport {
    pub(crate) fn new(name: &str, params: impl Into<String>) -> Self {
        CheckReport {
            name: name.to_string(),
            params: params.into(),
            passed: true,
            cases: 0,
            failure: None,
        }
    }

    /// Counts one comparison; keeps only the first failure.
    pub(crate) fn record(&mut self, mismatch: Option<Mismatch>) {
        self.cases += 1;
        if let Some(m) = mismatch {
            if self.failure.is_none() {
                self.failure = Some(m);
            }
            self.passed = false;
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({}): {} case(s)",
            self.name, self.params, self.cases
        )?;
        if let Some(m) = &self.failure {
            write!(f, "\n    first failure: {m}")?;
        }
        Ok(())
    }
}
