use crate::config::Config;
use crate::error::Result;
use crate::model::{transition_rates, Policy, StateSpace};
use crate::params::SystemParams;

/// Sparse generator over an enumerated state space. Only positive
/// off-diagonal rates are stored; the diagonal is minus the row sum.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    space: StateSpace,
    rows: Vec<Vec<(usize, f64)>>,
    policy: Policy,
}

impl GeneratorMatrix {
    pub fn new(space: StateSpace, rows: Vec<Vec<(usize, f64)>>, policy: Policy) -> Self {
        assert_eq!(space.len(), rows.len(), "one row per state");
        Self {
            space,
            rows,
            policy,
        }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    /// Off-diagonal entries of row `i` as `(column, rate)`, columns ascending.
    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    /// `-q(i, i)`.
    pub fn exit_rate(&self, i: usize) -> f64 {
        self.rows[i].iter().map(|&(_, r)| r).sum()
    }

    /// Entry `q(i, j)`, diagonal included.
    pub fn rate(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return -self.exit_rate(i);
        }
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|pos| self.rows[i][pos].1)
            .unwrap_or(0.0)
    }

    /// `max_j |(pi Q)_j|` for a vector indexed like the states.
    pub fn residual(&self, pi: &[f64]) -> f64 {
        let mut flow = vec![0.0; self.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let mut out = 0.0;
            for &(j, r) in row {
                flow[j] += pi[i] * r;
                out += r;
            }
            flow[i] -= pi[i] * out;
        }
        flow.into_iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Assembles the generator of `params` under `policy`.
pub fn build_generator(
    params: &SystemParams,
    policy: Policy,
    config: &Config,
) -> Result<GeneratorMatrix> {
    let space = StateSpace::enumerate(params, config.state_cap)?;
    let rows = space
        .states()
        .iter()
        .map(|x| {
            let mut row: Vec<(usize, f64)> = transition_rates(params, policy, x)
                .into_iter()
                .map(|(mv, rate)| {
                    let target = x.apply(mv).expect("positive rates never leave S");
                    let id = space
                        .id_of(&target)
                        .expect("positive rates never leave S");
                    (id, rate)
                })
                .collect();
            row.sort_by_key(|&(j, _)| j);
            row
        })
        .collect();
    Ok(GeneratorMatrix::new(space, rows, policy))
}
