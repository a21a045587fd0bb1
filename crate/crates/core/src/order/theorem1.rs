use rayon::prelude::*;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::model::{downward_rate, precedes, upward_rate, Layer, Policy, State, StateSpace};
use crate::params::SystemParams;

use super::{ComparisonVerdict, Violation, Witness};

/// Rates of one system at one state, split the way the rate conditions need.
struct RateRow {
    up1: Vec<f64>,
    down1: Vec<f64>,
    up_total: f64,
    down_total: f64,
}

fn rate_rows(params: &SystemParams, policy: Policy, states: &[State]) -> Vec<RateRow> {
    states
        .par_iter()
        .map(|x| {
            let k = params.classes();
            let up1: Vec<f64> = (0..k)
                .map(|c| upward_rate(params, x, Layer::Dedicated, c))
                .collect();
            let down1: Vec<f64> = (0..k)
                .map(|c| downward_rate(params, policy, x, Layer::Dedicated, c))
                .collect();
            let up_total = up1.iter().sum::<f64>()
                + (0..k)
                    .map(|c| upward_rate(params, x, Layer::Shared, c))
                    .sum::<f64>();
            let down_total = down1.iter().sum::<f64>()
                + (0..k)
                    .map(|c| downward_rate(params, policy, x, Layer::Shared, c))
                    .sum::<f64>();
            RateRow {
                up1,
                down1,
                up_total,
                down_total,
            }
        })
        .collect()
}

/// Exhaustive check of the two rate conditions under which the process of
/// `(x_params, x_policy)` is dominated by that of `(y_params, y_policy)` in
/// the layered preorder.
///
/// For every pair `x <= y`:
/// - where `x1[k] = y1[k]`, the layer-1 arrival rate of class `k` must not
///   decrease from `x` to `y`, and its layer-1 departure rate must not increase;
/// - where `|x| = |y|`, the same holds for the total arrival and departure rates.
///
/// Every violating pair is reported, ordered by `(x id, y id)`.
pub fn check_theorem1(
    x_params: &SystemParams,
    x_policy: Policy,
    y_params: &SystemParams,
    y_policy: Policy,
    config: &Config,
) -> Result<ComparisonVerdict> {
    if x_params.dedicated() != y_params.dedicated() || x_params.shared() != y_params.shared() {
        return Err(Error::Validation(
            "compared systems must share the server configuration".into(),
        ));
    }
    let space = StateSpace::enumerate(x_params, config.state_cap)?;
    let pairs = (space.len() as u128).pow(2);
    if pairs > config.pair_budget {
        return Err(Error::Capacity {
            what: "ordered state pairs",
            count: pairs,
            cap: config.pair_budget,
        });
    }
    let states = space.states();
    let rx = rate_rows(x_params, x_policy, states);
    let ry = rate_rows(y_params, y_policy, states);
    let slack = config.rate_slack;

    let violations: Vec<Violation> = (0..states.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let (x, a) = (&states[i], &rx[i]);
            let mut found = Vec::new();
            for (j, y) in states.iter().enumerate() {
                if !precedes(x, y) {
                    continue;
                }
                let b = &ry[j];
                let mut report = |condition: String, lhs: f64, rhs: f64| {
                    found.push(Violation {
                        x: Witness::State(x.clone()),
                        y: Witness::State(y.clone()),
                        condition,
                        lhs,
                        rhs,
                        upper_set: None,
                    })
                };
                for k in 0..x.classes() {
                    if x.x1[k] != y.x1[k] {
                        continue;
                    }
                    if a.up1[k] > b.up1[k] + slack {
                        report(format!("i:lambda_1,{}", k + 1), a.up1[k], b.up1[k]);
                    }
                    if a.down1[k] < b.down1[k] - slack {
                        report(format!("i:phi_1,{}", k + 1), a.down1[k], b.down1[k]);
                    }
                }
                if x.total() == y.total() {
                    if a.up_total > b.up_total + slack {
                        report("ii:lambda_total".into(), a.up_total, b.up_total);
                    }
                    if a.down_total < b.down_total - slack {
                        report("ii:phi_total".into(), a.down_total, b.down_total);
                    }
                }
            }
            found
        })
        .collect();
    Ok(ComparisonVerdict::from_violations(violations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(m: Vec<u32>, n: u32, lambda: Vec<f64>, mu: Vec<f64>) -> SystemParams {
        SystemParams::new(m, n, lambda, mu).unwrap()
    }

    #[test]
    fn overflow_below_packing_with_equal_rates() {
        let p = sys(vec![1, 0], 2, vec![1.0, 1.0], vec![1.0, 1.0]);
        let v = check_theorem1(&p, Policy::Overflow, &p, Policy::MaximumPacking, &Config::default())
            .unwrap();
        assert!(v.holds, "{}", v.to_json());
    }

    #[test]
    fn slowing_every_class_to_min_rate() {
        let p = sys(vec![1, 0], 2, vec![1.0, 1.0], vec![0.2, 10.0]);
        let slow = p.with_uniform_service(p.mu_min()).unwrap();
        let fast = p.with_uniform_service(p.mu_max()).unwrap();
        let cfg = Config::default();
        assert!(check_theorem1(&p, Policy::Overflow, &slow, Policy::Overflow, &cfg).unwrap().holds);
        assert!(check_theorem1(&fast, Policy::Overflow, &p, Policy::Overflow, &cfg).unwrap().holds);
    }

    #[test]
    fn unequal_rates_break_packing_comparison() {
        let p = sys(vec![1, 0], 2, vec![1.0, 1.0], vec![0.2, 10.0]);
        let v = check_theorem1(&p, Policy::Overflow, &p, Policy::MaximumPacking, &Config::default())
            .unwrap();
        assert!(!v.holds);
        assert!(v.violations.iter().all(|w| w.condition.starts_with("ii:")));
    }

    #[test]
    fn mismatched_servers_are_rejected() {
        let p = sys(vec![1, 0], 2, vec![1.0, 1.0], vec![1.0, 1.0]);
        let q = sys(vec![1, 1], 2, vec![1.0, 1.0], vec![1.0, 1.0]);
        let cfg = Config::default();
        assert!(check_theorem1(&p, Policy::Overflow, &q, Policy::Overflow, &cfg).is_err());
    }

    #[test]
    fn pair_budget_is_enforced() {
        let p = sys(vec![1, 0], 2, vec![1.0, 1.0], vec![1.0, 1.0]);
        let cfg = Config {
            pair_budget: 143,
            ..Config::default()
        };
        assert!(matches!(
            check_theorem1(&p, Policy::Overflow, &p, Policy::Overflow, &cfg),
            Err(Error::Capacity { .. })
        ));
    }
}
