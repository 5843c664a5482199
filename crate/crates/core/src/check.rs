//! Named residual records shared by every verification routine.

use std::fmt;

/// How a measured value is compared against its threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Passes when `value <= threshold` (residuals).
    AtMost,
    /// Passes when `value >= threshold` (quantities that must stay large).
    AtLeast,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::AtMost => "le",
            Relation::AtLeast => "ge",
        }
    }
}

/// One verified identity: a measured residual, its tolerance and the verdict.
///
/// NaN residuals never pass.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            tolerance,
            relation: Relation::AtMost,
            pass: residual <= tolerance,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            residual: value,
            tolerance: threshold,
            relation: Relation::AtLeast,
            pass: value >= threshold,
        }
    }

    /// A boolean condition recorded as residual 0 (holds) or 1 (fails).
    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        Check::at_most(name, if holds { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        write!(
            f,
            "[{}] {}: {:.3e} {} {:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            op,
            self.tolerance
        )
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
