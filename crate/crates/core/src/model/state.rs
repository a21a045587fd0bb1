use std::fmt;

use serde::{Deserialize, Serialize};

use crate::params::SystemParams;

/// Server layer. Layer 1 holds the dedicated servers, layer 2 the shared ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Layer {
    Dedicated,
    Shared,
}

impl Layer {
    pub fn number(self) -> usize {
        match self {
            Layer::Dedicated => 1,
            Layer::Shared => 2,
        }
    }
}

/// Occupancy `x[i][k]`: class-`k` customers in service at layer `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State {
    pub x1: Vec<u32>,
    pub x2: Vec<u32>,
}

impl State {
    pub fn empty(classes: usize) -> Self {
        Self {
            x1: vec![0; classes],
            x2: vec![0; classes],
        }
    }

    pub fn new(x1: Vec<u32>, x2: Vec<u32>) -> Self {
        assert_eq!(x1.len(), x2.len(), "layer vectors must have equal length");
        Self { x1, x2 }
    }

    pub fn classes(&self) -> usize {
        self.x1.len()
    }

    pub fn layer(&self, layer: Layer) -> &[u32] {
        match layer {
            Layer::Dedicated => &self.x1,
            Layer::Shared => &self.x2,
        }
    }

    fn layer_mut(&mut self, layer: Layer) -> &mut Vec<u32> {
        match layer {
            Layer::Dedicated => &mut self.x1,
            Layer::Shared => &mut self.x2,
        }
    }

    /// `|x|`, the number of customers in the system.
    pub fn total(&self) -> u32 {
        self.x1.iter().sum::<u32>() + self.shared_total()
    }

    /// Customers at layer 2 over all classes.
    pub fn shared_total(&self) -> u32 {
        self.x2.iter().sum()
    }

    /// Customers of class `k` over both layers.
    pub fn class_total(&self, k: usize) -> u32 {
        self.x1[k] + self.x2[k]
    }

    pub fn class_totals(&self) -> Vec<u32> {
        (0..self.classes()).map(|k| self.class_total(k)).collect()
    }

    /// Membership in the state space of `params`.
    pub fn is_valid(&self, params: &SystemParams) -> bool {
        self.classes() == params.classes()
            && self.x1.iter().zip(params.dedicated()).all(|(x, m)| x <= m)
            && self.shared_total() <= params.shared()
    }

    /// Applies a unit move; `None` if a count would go negative.
    pub fn apply(&self, mv: Move) -> Option<State> {
        let mut next = self.clone();
        let slot = &mut next.layer_mut(mv.layer)[mv.class];
        if mv.up {
            *slot += 1;
        } else {
            *slot = slot.checked_sub(1)?;
        }
        Some(next)
    }

    /// Classes `0` and `k` exchanged.
    pub fn swap_classes(&self, k: usize) -> State {
        let mut s = self.clone();
        s.x1.swap(0, k);
        s.x2.swap(0, k);
        s
    }

    /// Writes the state as a sum of unit vectors, e.g. `e_{1,1} + 2e_{2,2}`,
    /// with one-based layer and class labels; the empty state prints as `0`.
    pub fn unit_form(&self) -> String {
        let terms: Vec<String> = [Layer::Dedicated, Layer::Shared]
            .into_iter()
            .flat_map(|layer| {
                self.layer(layer)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c > 0)
                    .map(move |(k, &c)| {
                        let coef = if c == 1 { String::new() } else { c.to_string() };
                        format!("{coef}e_{{{},{}}}", layer.number(), k + 1)
                    })
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}|{})", join(&self.x1), join(&self.x2))
    }
}

/// A signed unit move `x -> x +/- e_{i,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub layer: Layer,
    pub class: usize,
    pub up: bool,
}

impl Move {
    pub fn arrival(layer: Layer, class: usize) -> Self {
        Self {
            layer,
            class,
            up: true,
        }
    }

    pub fn departure(layer: Layer, class: usize) -> Self {
        Self {
            layer,
            class,
            up: false,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.up { '+' } else { '-' };
        write!(f, "{sign}e_{{{},{}}}", self.layer.number(), self.class + 1)
    }
}
