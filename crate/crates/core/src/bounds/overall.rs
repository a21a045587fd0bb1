use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact::{Pmf, Projection};
use crate::model::{binomial, bounded_sum_vectors};
use crate::params::SystemParams;

use super::{erlang_b, erlang_distribution, erlang_mean, mp_stationary, ErlangSpec, Interval};

/// Every configuration obtained by moving all `n` shared servers into layer
/// 1: `m' >= m` componentwise with `sum m' = sum m + n`. The first
/// component decreases fastest, so `m = (1, 0), n = 2` yields
/// `(3,0), (2,1), (1,2)`.
pub fn enumerate_cmn(params: &SystemParams, cap: usize) -> Result<Vec<Vec<u32>>> {
    let k = params.classes() as u128;
    let n = params.shared() as u128;
    let count = binomial(n + k - 1, k - 1);
    if count > cap as u128 {
        return Err(Error::capacity("configuration set", count, cap));
    }
    let mut compositions: Vec<Vec<u32>> = bounded_sum_vectors(params.classes(), params.shared())
        .into_iter()
        .filter(|c| c.iter().sum::<u32>() == params.shared())
        .collect();
    compositions.reverse();
    Ok(compositions
        .into_iter()
        .map(|c| c.iter().zip(params.dedicated()).map(|(a, b)| a + b).collect())
        .collect())
}

/// Scalar summaries of one system without shared servers, as a product of
/// independent Erlang systems.
#[derive(Debug, Clone, Copy)]
struct DedicatedOnly {
    mean: f64,
    throughput: f64,
    blocking: f64,
}

fn dedicated_only(params: &SystemParams, config_m: &[u32], mu: f64) -> Result<DedicatedOnly> {
    let mut mean = 0.0;
    let mut carried = 0.0;
    for (k, &servers) in config_m.iter().enumerate() {
        let spec = ErlangSpec::new(servers, params.arrival_rates()[k] / mu)?;
        mean += erlang_mean(spec);
        carried += params.arrival_rates()[k] * (1.0 - erlang_b(spec));
    }
    let throughput = mu * mean;
    Ok(DedicatedOnly {
        mean,
        throughput,
        blocking: 1.0 - carried / params.total_arrival_rate(),
    })
}

/// Mean, throughput and blocking of the packed system with all rates `mu_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PackedReference {
    pub service_rate: f64,
    pub mean: f64,
    pub throughput: f64,
    pub blocking: f64,
}

/// Bounds for the whole system. The lower side uses systems without shared
/// servers at rate `mu_max`, the upper side the packed system at `mu_min`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverallBounds {
    /// `mu_max / mu_min`.
    pub r_mu: f64,
    pub mean_number: Interval,
    pub mean_number_argmax: Vec<u32>,
    pub throughput: Interval,
    pub throughput_argmax: Vec<u32>,
    /// Lower endpoint is `max(raw, 0)`.
    pub blocking: Interval,
    pub blocking_argmin: Vec<u32>,
    pub blocking_lower_raw: f64,
    pub blocking_lower_clamped: bool,
    pub packed: PackedReference,
    /// Law of `sum_k Erl(m'_k, lambda_k / mu_max)` at `mean_number_argmax`.
    #[serde(skip)]
    pub lower: Pmf,
    /// Law of `|x|` under the packed `mu_min` system.
    #[serde(skip)]
    pub upper: Pmf,
}

fn arg_best(values: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    (1..values.len()).fold(0, |best, i| if better(values[i], values[best]) { i } else { best })
}

pub fn overall_bounds(params: &SystemParams, config: &Config) -> Result<OverallBounds> {
    let (mu_min, mu_max) = (params.mu_min(), params.mu_max());
    let r_mu = mu_max / mu_min;
    let lambda_total = params.total_arrival_rate();

    let configs = enumerate_cmn(params, config.config_cap)?;
    let scans = configs
        .par_iter()
        .map(|c| dedicated_only(params, c, mu_max))
        .collect::<Result<Vec<_>>>()?;
    let means: Vec<f64> = scans.iter().map(|s| s.mean).collect();
    let throughputs: Vec<f64> = scans.iter().map(|s| s.throughput / r_mu).collect();
    let blockings: Vec<f64> = scans
        .iter()
        .map(|s| 1.0 - (1.0 - s.blocking) / r_mu)
        .collect();
    let i_mean = arg_best(&means, |a, b| a > b);
    let i_thr = arg_best(&throughputs, |a, b| a > b);
    let i_blk = arg_best(&blockings, |a, b| a < b);

    let slow = params.with_uniform_service(mu_min)?;
    let packed_law = mp_stationary(&slow, config.state_cap)?;
    let upper = packed_law.marginal(Projection::Overall);
    let packed_mean = upper.mean();
    let packed_throughput = mu_min * packed_mean;
    let packed = PackedReference {
        service_rate: mu_min,
        mean: packed_mean,
        throughput: packed_throughput,
        blocking: 1.0 - packed_throughput / lambda_total,
    };
    let blocking_lower_raw = 1.0 - r_mu * (1.0 - packed.blocking);

    let lower = configs[i_mean]
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            ErlangSpec::new(s, params.arrival_rates()[k] / mu_max).map(erlang_distribution)
        })
        .try_fold(Pmf::point_mass(0), |acc, d| d.map(|d| acc.convolve(&d)))?;

    Ok(OverallBounds {
        r_mu,
        mean_number: Interval {
            lower: means[i_mean],
            upper: packed.mean,
        },
        mean_number_argmax: configs[i_mean].clone(),
        throughput: Interval {
            lower: throughputs[i_thr],
            upper: r_mu * packed.throughput,
        },
        throughput_argmax: configs[i_thr].clone(),
        blocking: Interval {
            lower: blocking_lower_raw.max(0.0),
            upper: blockings[i_blk],
        },
        blocking_argmin: configs[i_blk].clone(),
        blocking_lower_raw,
        blocking_lower_clamped: blocking_lower_raw < 0.0,
        packed,
        lower,
        upper,
    })
}
