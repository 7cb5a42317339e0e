//! Verification records.

use serde::{Deserialize, Serialize};

/// One library-versus-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub target_name: String,
    pub library_value: f64,
    pub oracle_value: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub passed: bool,
    pub notes: String,
}

fn errors(library: f64, oracle: f64) -> (f64, f64) {
    let abs_err = (library - oracle).abs();
    let rel_err = if oracle != 0.0 {
        abs_err / oracle.abs()
    } else if abs_err == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    (abs_err, rel_err)
}

impl OracleReport {
    /// Passes when `|library - oracle| <= max(abs_tol, rel_tol |oracle|)`.
    pub fn compare(
        name: impl Into<String>,
        library: f64,
        oracle: f64,
        abs_tol: f64,
        rel_tol: f64,
    ) -> Self {
        let (abs_err, rel_err) = errors(library, oracle);
        let passed = abs_err <= abs_tol.max(rel_tol * oracle.abs());
        Self {
            target_name: name.into(),
            library_value: library,
            oracle_value: oracle,
            abs_err,
            rel_err,
            passed,
            notes: format!("tolerance abs {abs_tol:e}, rel {rel_tol:e}"),
        }
    }

    /// Passes when `value < limit`; the limit is recorded as the oracle value.
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            target_name: name.into(),
            library_value: value,
            oracle_value: limit,
            abs_err: value,
            rel_err: value / limit,
            passed: value < limit,
            notes: format!("statistic must stay below {limit:e}"),
        }
    }

    /// Passes when `value > limit`.
    pub fn above(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            target_name: name.into(),
            library_value: value,
            oracle_value: limit,
            abs_err: value,
            rel_err: value / limit,
            passed: value > limit,
            notes: format!("statistic must exceed {limit:e}"),
        }
    }

    /// Passes when the two values are *not* within the tolerance: used to
    /// record that an alternative formula disagrees with the oracle.
    pub fn mismatch(
        name: impl Into<String>,
        candidate: f64,
        oracle: f64,
        abs_tol: f64,
    ) -> Self {
        let (abs_err, rel_err) = errors(candidate, oracle);
        Self {
            target_name: name.into(),
            library_value: candidate,
            oracle_value: oracle,
            abs_err,
            rel_err,
            passed: abs_err > abs_tol,
            notes: format!("expected to disagree by more than {abs_tol:e}"),
        }
    }

    /// A yes/no property; both values carry `1` for true and `0` for false.
    pub fn property(name: impl Into<String>, holds: bool, notes: impl Into<String>) -> Self {
        let v = if holds { 1.0 } else { 0.0 };
        Self {
            target_name: name.into(),
            library_value: v,
            oracle_value: 1.0,
            abs_err: 1.0 - v,
            rel_err: 1.0 - v,
            passed: holds,
            notes: notes.into(),
        }
    }

    /// A check that could not be carried out, recorded as a failure.
    pub fn failed(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            target_name: name.into(),
            library_value: f64::NAN,
            oracle_value: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            passed: false,
            notes: reason.into(),
        }
    }

    pub fn with_note(mut self, note: impl AsRef<str>) -> Self {
        if !self.notes.is_empty() {
            self.notes.push_str("; ");
        }
        self.notes.push_str(note.as_ref());
        self
    }
}
