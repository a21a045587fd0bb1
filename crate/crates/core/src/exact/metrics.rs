use std::io::Write;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::model::{region_of, Region};
use crate::params::SystemParams;

use super::StateDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    /// Mean number of class-k customers in the system.
    pub mean: f64,
    /// Completions per unit time, `mu_k * mean`.
    pub throughput: f64,
    /// `1 - throughput / lambda_k`.
    pub blocking: f64,
    /// Stationary mass of the blocking states of class k.
    pub blocking_direct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryMetrics {
    pub per_class: Vec<ClassMetrics>,
    pub mean: f64,
    pub throughput: f64,
    pub blocking: f64,
}

/// Per-class and overall means, throughputs and blocking probabilities.
///
/// Blocking is computed from the conservation law and cross-checked against
/// the stationary mass of the blocking states; a gap above
/// `config.pasta_tol` is an error.
pub fn metrics(
    params: &SystemParams,
    pi: &StateDistribution,
    config: &Config,
) -> Result<StationaryMetrics> {
    let per_class: Vec<ClassMetrics> = (0..params.classes())
        .map(|k| {
            let mean = pi.expect(|x| x.class_total(k) as f64);
            let throughput = params.service_rates()[k] * mean;
            let blocking = 1.0 - throughput / params.arrival_rates()[k];
            let blocking_direct = pi.expect(|x| {
                if region_of(params, x, k) == Region::B {
                    1.0
                } else {
                    0.0
                }
            });
            ClassMetrics {
                mean,
                throughput,
                blocking,
                blocking_direct,
            }
        })
        .collect();

    if let Some((k, c)) = per_class
        .iter()
        .enumerate()
        .find(|(_, c)| (c.blocking - c.blocking_direct).abs() > config.pasta_tol)
    {
        return Err(Error::Consistency(format!(
            "class {} blocking {} from conservation but {} from blocking states",
            k + 1,
            c.blocking,
            c.blocking_direct
        )));
    }

    let mean = per_class.iter().map(|c| c.mean).sum();
    let throughput: f64 = per_class.iter().map(|c| c.throughput).sum();
    Ok(StationaryMetrics {
        per_class,
        mean,
        throughput,
        blocking: 1.0 - throughput / params.total_arrival_rate(),
    })
}

/// One row per state: `state_id, x1_1..x1_K, x2_1..x2_K, probability`.
pub fn write_distribution_csv<W: Write>(out: W, pi: &StateDistribution) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let classes = pi.states().first().map_or(0, |s| s.classes());
    let mut header = vec!["state_id".to_string()];
    for layer in 1..=2 {
        header.extend((1..=classes).map(|k| format!("x{layer}_{k}")));
    }
    header.push("probability".into());
    w.write_record(&header)?;
    for (id, (x, p)) in pi.iter().enumerate() {
        let mut row = vec![id.to_string()];
        row.extend(x.x1.iter().chain(&x.x2).map(u32::to_string));
        row.push(p.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Named rows `a_k, theta_k, b_k` per class, then `a, theta, b`.
pub fn write_metrics_csv<W: Write>(out: W, m: &StationaryMetrics) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "value"])?;
    for (k, c) in m.per_class.iter().enumerate() {
        let k = k + 1;
        w.write_record([format!("a_{k}"), c.mean.to_string()])?;
        w.write_record([format!("theta_{k}"), c.throughput.to_string()])?;
        w.write_record([format!("b_{k}"), c.blocking.to_string()])?;
    }
    w.write_record(["a".to_string(), m.mean.to_string()])?;
    w.write_record(["theta".to_string(), m.throughput.to_string()])?;
    w.write_record(["b".to_string(), m.blocking.to_string()])?;
    w.flush()?;
    Ok(())
}
