//! Generator assembly, stationary solves and performance metrics. These are
//! the exact reference values every bound is judged against.

mod distribution;
mod generator;
mod metrics;
mod solver;

pub use distribution::{marginal_total, Pmf, Projection, StateDistribution};
pub use generator::{build_generator, GeneratorMatrix};
pub use metrics::{metrics, write_distribution_csv, write_metrics_csv, ClassMetrics, StationaryMetrics};
pub use solver::{stationary, SolveMethod, Stationary};

use crate::config::Config;
use crate::error::Result;
use crate::model::Policy;
use crate::params::SystemParams;

/// Generator, stationary law and metrics of one system in a single call.
#[derive(Debug, Clone)]
pub struct Solution {
    pub stationary: Stationary,
    pub metrics: StationaryMetrics,
}

impl Solution {
    pub fn distribution(&self) -> &StateDistribution {
        &self.stationary.distribution
    }
}

pub fn solve(params: &SystemParams, policy: Policy, config: &Config) -> Result<Solution> {
    let gen = build_generator(params, policy, config)?;
    let stationary = stationary(&gen, config)?;
    let metrics = metrics(params, &stationary.distribution, config)?;
    Ok(Solution {
        stationary,
        metrics,
    })
}
