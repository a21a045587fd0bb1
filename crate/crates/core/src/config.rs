//! Caps and numerical tolerances shared by every computation.

use serde::{Deserialize, Serialize};

/// One record for every cap and tolerance used in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Largest state space any enumeration may produce.
    pub state_cap: usize,
    /// Largest number of server configurations enumerated for the overall lower bound.
    pub config_cap: usize,
    /// Largest number of ordered state pairs a rate-condition scan may visit.
    pub pair_budget: u128,
    /// Largest state space on which all upper sets are enumerated.
    pub upper_set_cap: usize,
    /// Spaces up to this size are solved by sparse LU, larger ones iteratively.
    pub direct_solve_limit: usize,
    /// Required sup-norm of `pi Q` for a stationary solve.
    pub residual_tol: f64,
    /// Iteration budget of the uniformized power iteration.
    pub max_iterations: usize,
    /// Allowed gap between blocking from the blocking states and from conservation.
    pub pasta_tol: f64,
    /// Absolute slack for rate inequalities.
    pub rate_slack: f64,
    /// Absolute slack for comparing tail probabilities.
    pub dominance_slack: f64,
    /// Tolerance when comparing against the published table values.
    pub golden_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            state_cap: 2_000_000,
            config_cap: 1_000_000,
            pair_budget: 100_000_000,
            upper_set_cap: 18,
            direct_solve_limit: 50_000,
            residual_tol: 1e-10,
            max_iterations: 1_000_000,
            pasta_tol: 1e-9,
            rate_slack: 1e-12,
            dominance_slack: 1e-12,
            golden_tol: 1e-6,
        }
    }
}
