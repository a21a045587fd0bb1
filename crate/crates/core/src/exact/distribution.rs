use std::collections::HashMap;

use serde::Serialize;

use crate::model::State;

/// A probability mass function on the integers `0..len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Self {
        assert!(!probs.is_empty(), "a pmf needs at least one support point");
        Self { probs }
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn point_mass(at: usize) -> Self {
        let mut probs = vec![0.0; at + 1];
        probs[at] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest support point.
    pub fn max_value(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn prob(&self, j: usize) -> f64 {
        self.probs.get(j).copied().unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(j, p)| j as f64 * p)
            .sum()
    }

    /// `P(X > j)`; zero beyond the support.
    pub fn ccdf(&self, j: usize) -> f64 {
        self.probs.iter().skip(j + 1).sum()
    }

    /// `P(X > j)` for `j = 0..len`, one pass from the right.
    pub fn ccdf_curve(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        let mut acc = 0.0;
        for j in (0..self.probs.len().max(len)).rev() {
            if j < len {
                out[j] = acc;
            }
            acc += self.prob(j);
        }
        out
    }

    /// Law of the sum of independent variables.
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        let mut probs = vec![0.0; self.probs.len() + other.probs.len() - 1];
        for (i, p) in self.probs.iter().enumerate() {
            for (j, q) in other.probs.iter().enumerate() {
                probs[i + j] += p * q;
            }
        }
        Pmf { probs }
    }
}

/// A probability distribution over an explicit list of states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    states: Vec<State>,
    probs: Vec<f64>,
}

/// Image of a state distribution on the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `x1[k] + x2[k]`.
    Class(usize),
    /// `|x|`.
    Overall,
}

impl StateDistribution {
    pub fn new(states: Vec<State>, probs: Vec<f64>) -> Self {
        assert_eq!(states.len(), probs.len(), "support and probabilities differ in length");
        Self { states, probs }
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, f64)> {
        self.states.iter().zip(self.probs.iter().copied())
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn expect(&self, f: impl Fn(&State) -> f64) -> f64 {
        self.iter().map(|(s, p)| p * f(s)).sum()
    }

    /// Pushforward under the projection.
    pub fn marginal(&self, projection: Projection) -> Pmf {
        let value = |s: &State| match projection {
            Projection::Class(k) => s.class_total(k) as usize,
            Projection::Overall => s.total() as usize,
        };
        let top = self.states.iter().map(value).max().unwrap_or(0);
        let mut probs = vec![0.0; top + 1];
        for (s, p) in self.iter() {
            probs[value(s)] += p;
        }
        Pmf::new(probs)
    }

    /// Total-variation distance, matching states by value.
    pub fn tv_distance(&self, other: &StateDistribution) -> f64 {
        let mut diff: HashMap<&State, f64> = HashMap::new();
        for (s, p) in self.iter() {
            *diff.entry(s).or_default() += p;
        }
        for (s, p) in other.iter() {
            *diff.entry(s).or_default() -= p;
        }
        0.5 * diff.values().map(|d| d.abs()).sum::<f64>()
    }
}

/// Pushforward of `pi` under a per-class or overall count.
pub fn marginal_total(pi: &StateDistribution, projection: Projection) -> Pmf {
    pi.marginal(projection)
}
