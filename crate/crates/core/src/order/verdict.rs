use serde::Serialize;

use crate::model::State;

/// One side of a reported violation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    State(State),
    /// A point of an integer support.
    Count(usize),
    /// State ids of an upper set.
    Set(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub x: Witness,
    pub y: Witness,
    pub condition: String,
    pub lhs: f64,
    pub rhs: f64,
    /// State ids of the upper set that exposed the violation, when one did.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_set: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonVerdict {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

impl ComparisonVerdict {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            holds: violations.is_empty(),
            violations,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts always serialize")
    }
}
