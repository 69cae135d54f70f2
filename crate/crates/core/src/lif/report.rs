use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ring::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub index: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of one identity check. `passed` holds exactly when
/// `first_mismatch` is `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(rename = "check")]
    pub check_name: String,
    pub passed: bool,
    #[serde(rename = "mismatch")]
    pub first_mismatch: Option<Mismatch>,
    pub seed: u64,
}

impl VerifyReport {
    /// Scans `(index, lhs, rhs)` triples and records the first disagreement.
    pub fn from_pairs<I>(check: impl Into<String>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational, Rational)>,
    {
        let first_mismatch = pairs
            .into_iter()
            .find(|(_, lhs, rhs)| lhs != rhs)
            .map(|(index, lhs, rhs)| Mismatch { index, lhs, rhs });
        VerifyReport {
            check_name: check.into(),
            passed: first_mismatch.is_none(),
            first_mismatch,
            seed: 0,
        }
    }

    pub fn from_mismatch(
        check: impl Into<String>,
        mismatch: Option<(usize, Rational, Rational)>,
    ) -> Self {
        Self::from_pairs(check, mismatch)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.check_name = name.into();
        self
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.first_mismatch {
            None => write!(f, "PASS {}", self.check_name),
            Some(m) => write!(
                f,
                "FAIL {} index={} lhs={} rhs={}",
                self.check_name, m.index, m.lhs, m.rhs
            ),
        }
    }
}
