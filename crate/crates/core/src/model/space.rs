use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::params::SystemParams;

use super::State;

/// `C(n + k, k)`, saturating.
pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of states without enumerating them: the layer-1 box times the
/// number of layer-2 vectors with sum at most `n`.
pub fn state_count(params: &SystemParams) -> u128 {
    let boxes = params
        .dedicated()
        .iter()
        .fold(1u128, |acc, &m| acc.saturating_mul(m as u128 + 1));
    let k = params.classes() as u128;
    boxes.saturating_mul(binomial(params.shared() as u128 + k, k))
}

/// Every vector in `Z_+^len` with component sum at most `budget`, lexicographically.
pub(crate) fn bounded_sum_vectors(len: usize, budget: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=budget {
            prefix.push(v);
            rec(prefix, left - 1, budget - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(len), len, budget, &mut out);
    out
}

/// Every vector `v` with `v[k] <= bounds[k]`, lexicographically.
pub(crate) fn box_vectors(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bounds.len())];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// The enumerated state space, in lexicographic order of
/// `(x1[0..K], x2[0..K])`. A state's position is its canonical id.
#[derive(Debug, Clone)]
pub struct StateSpace {
    states: Vec<State>,
    index: HashMap<State, usize>,
}

impl StateSpace {
    pub fn enumerate(params: &SystemParams, cap: usize) -> Result<Self> {
        let count = state_count(params);
        if count > cap as u128 {
            return Err(Error::capacity("state space", count, cap));
        }
        let shared = bounded_sum_vectors(params.classes(), params.shared());
        let states = box_vectors(params.dedicated())
            .into_iter()
            .flat_map(|x1| {
                shared
                    .iter()
                    .map(move |x2| State::new(x1.clone(), x2.clone()))
            })
            .collect();
        Ok(Self::from_states(states))
    }

    /// Wraps an explicit state list; ids follow the given order.
    pub fn from_states(states: Vec<State>) -> Self {
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self { states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: usize) -> &State {
        &self.states[id]
    }

    pub fn id_of(&self, state: &State) -> Option<usize> {
        self.index.get(state).copied()
    }
}

/// All states of `params`, each once, in canonical order.
pub fn enumerate_states(params: &SystemParams, cap: usize) -> Result<Vec<State>> {
    StateSpace::enumerate(params, cap).map(|s| s.states)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: Vec<u32>, n: u32) -> SystemParams {
        let k = m.len();
        SystemParams::new(m, n, vec![1.0; k], vec![1.0; k]).unwrap()
    }

    // Oracle: scan the full box [0, m] x [0, n]^K and keep members of S.
    fn brute_force(p: &SystemParams) -> Vec<State> {
        let mut bounds = p.dedicated().to_vec();
        bounds.extend(std::iter::repeat_n(p.shared(), p.classes()));
        box_vectors(&bounds)
            .into_iter()
            .map(|v| {
                let (a, b) = v.split_at(p.classes());
                State::new(a.to_vec(), b.to_vec())
            })
            .filter(|s| s.is_valid(p))
            .collect()
    }

    #[test]
    fn empty_system_has_one_state() {
        let states = enumerate_states(&params(vec![0], 0), 100).unwrap();
        assert_eq!(states, vec![State::empty(1)]);
    }

    #[test]
    fn lattice_simplex_counts() {
        assert_eq!(enumerate_states(&params(vec![1, 0], 2), 100).unwrap().len(), 12);
        assert_eq!(
            enumerate_states(&params(vec![5, 5], 5), 10_000).unwrap().len(),
            756
        );
    }

    #[test]
    fn matches_brute_force_in_order() {
        for (m, n) in [(vec![1, 0], 2), (vec![2, 1, 0], 2), (vec![0, 0], 3), (vec![3], 1)] {
            let p = params(m, n);
            let states = enumerate_states(&p, 10_000).unwrap();
            assert_eq!(states, brute_force(&p));
            assert_eq!(states.len() as u128, state_count(&p));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_states(&params(vec![5, 5], 5), 755).unwrap_err();
        assert!(matches!(err, Error::Capacity { count: 756, .. }));
    }
}
