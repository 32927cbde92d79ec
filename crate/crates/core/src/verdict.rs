use std::time::{Duration, Instant};

use serde::Serialize;

/// Whether a check enumerated its whole domain or a seeded sample of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exhaustive,
    Sampled,
}

/// A named element in a witness tuple. Values are element codes, except for
/// the integers handle where they are the integers themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub role: String,
    pub value: i64,
}

impl Witness {
    pub fn new(role: impl Into<String>, value: impl Into<i64>) -> Self {
        Witness {
            role: role.into(),
            value: value.into(),
        }
    }
}

/// Outcome of a predicate or decomposition search.
///
/// For a universally quantified predicate that fails, `witness` holds the
/// minimal offending element(s). For an existential search that succeeds,
/// it holds the decomposition found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Vec<Witness>,
    pub exponents: Vec<(String, u64)>,
    pub mode: CheckMode,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: Vec::new(),
            exponents: Vec::new(),
            mode: CheckMode::Exhaustive,
            elapsed: Duration::ZERO,
        }
    }

    pub fn fail() -> Self {
        Verdict {
            holds: false,
            ..Verdict::pass()
        }
    }

    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::pass()
        } else {
            Verdict::fail()
        }
    }

    pub fn with_witness(mut self, role: impl Into<String>, value: impl Into<i64>) -> Self {
        self.witness.push(Witness::new(role, value));
        self
    }

    pub fn with_exponent(mut self, name: impl Into<String>, value: u64) -> Self {
        self.exponents.push((name.into(), value));
        self
    }

    pub fn with_mode(mut self, mode: CheckMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }

    /// Value of the first witness entry with the given role.
    pub fn witness_value(&self, role: &str) -> Option<i64> {
        self.witness.iter().find(|w| w.role == role).map(|w| w.value)
    }

    pub fn exponent(&self, name: &str) -> Option<u64> {
        self.exponents.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}
