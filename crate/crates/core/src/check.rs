//! Reports produced by the sampled axiom checkers.

use serde::Serialize;

/// Relative margin applied before an inequality is reported as violated.
/// Ties within this margin count as satisfied.
pub const STRICT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Positivity,
    Monotonicity,
    Scalability,
    Definiteness,
    Homogeneity,
    TriangleInequality,
}

/// A concrete counterexample found by a checker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub property: Property,
    /// Coordinate at which the inequality failed, when it is coordinate-wise.
    pub coordinate: Option<usize>,
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    /// The two sides of the violated inequality `lhs ≤ rhs` (or `lhs > 0`).
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub trials_run: usize,
    pub violation: Option<Violation>,
}

impl CheckReport {
    pub(crate) fn pass(trials_run: usize) -> Self {
        Self {
            passed: true,
            trials_run,
            violation: None,
        }
    }

    pub(crate) fn fail(trials_run: usize, violation: Violation) -> Self {
        Self {
            passed: false,
            trials_run,
            violation: Some(violation),
        }
    }
}
