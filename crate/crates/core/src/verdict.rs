use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Which alternative of a criterion produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Interior diagonal, strict inequality on the middle superdiagonal.
    Main,
    /// `|alpha2|^2` equals `(1-|omega2|^2)(1-|omega3|^2)`.
    BoundaryAlpha2,
    Omega2Unimodular,
    Omega3Unimodular,
    BothUnimodular,
    /// A diagonal entry has modulus above one, or an input block is not a
    /// contraction.
    PreconditionFailed,
    /// Verdicts that do not come from a closed-form criterion.
    Oracle,
    Parrott,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Branch::Main => "Main",
            Branch::BoundaryAlpha2 => "BoundaryAlpha2",
            Branch::Omega2Unimodular => "Omega2Unimodular",
            Branch::Omega3Unimodular => "Omega3Unimodular",
            Branch::BothUnimodular => "BothUnimodular",
            Branch::PreconditionFailed => "PreconditionFailed",
            Branch::Oracle => "Oracle",
            Branch::Parrott => "Parrott",
        };
        f.write_str(name)
    }
}

/// Outcome of a contraction test.
///
/// Residuals are stored as `rhs - lhs`, so a non-negative residual means the
/// condition holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub is_contraction: bool,
    pub branch: Branch,
    pub residuals: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(branch: Branch) -> Self {
        Verdict {
            is_contraction: false,
            branch,
            residuals: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn residual(&self, label: &str) -> Option<f64> {
        self.residuals.get(label).copied()
    }

    /// Smallest recorded residual, `+inf` if none.
    pub fn worst_residual(&self) -> f64 {
        self.residuals.values().copied().fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn record(&mut self, label: &str, residual: f64) {
        self.residuals.insert(label.to_string(), residual);
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Labels whose residuals fall below `-slack` (NaN counts as failing).
    pub fn failing(&self, slack: f64) -> Vec<&str> {
        self.residuals
            .iter()
            .filter(|(_, &r)| r.is_nan() || r < -slack)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Sets `is_contraction` from the recorded residuals.
    pub(crate) fn settle(mut self, slack: f64) -> Self {
        self.is_contraction = self.failing(slack).is_empty();
        self
    }
}
