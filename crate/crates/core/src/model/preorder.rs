use serde::{Deserialize, Serialize};

use super::State;

/// Orderings on states used to compare two systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preorder {
    /// `x <= y` iff `x1[k] <= y1[k]` for every class and `|x| <= |y|`.
    Layered,
    /// `x <= y` iff `|x| <= |y|`.
    Total,
}

impl Preorder {
    pub fn holds(self, x: &State, y: &State) -> bool {
        match self {
            Preorder::Layered => precedes(x, y),
            Preorder::Total => x.total() <= y.total(),
        }
    }
}

/// The layered preorder. Reflexive and transitive, not antisymmetric:
/// `e_{2,1}` and `e_{2,2}` precede each other.
pub fn precedes(x: &State, y: &State) -> bool {
    x.x1.iter().zip(&y.x1).all(|(a, b)| a <= b) && x.total() <= y.total()
}
