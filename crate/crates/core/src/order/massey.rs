use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact::GeneratorMatrix;
use crate::model::Preorder;

use super::{enumerate_upper_sets, ComparisonVerdict, UpperSet, Violation, Witness};

fn flow_into(row: &[(usize, f64)], set: UpperSet) -> f64 {
    row.iter()
        .filter(|&&(j, _)| set.contains(j))
        .map(|&(_, r)| r)
        .sum::<f64>()
        + 0.0
}

fn flow_out_of(row: &[(usize, f64)], set: UpperSet) -> f64 {
    row.iter()
        .filter(|&&(j, _)| !set.contains(j))
        .map(|&(_, r)| r)
        .sum::<f64>()
        + 0.0
}

/// Generator-level check that the process of `p` is stochastically below
/// that of `q` under `preorder`.
///
/// For every pair `x <= y` and every upper set `U`:
/// - if neither state is in `U`, the rate from `x` into `U` under `p` is at
///   most the rate from `y` into `U` under `q`;
/// - if both are in `U`, the rate from `x` out of `U` under `p` is at least
///   the rate from `y` out of `U` under `q`.
///
/// For each pair and family, the first upper set in enumeration order that
/// fails is reported.
pub fn check_massey(
    p: &GeneratorMatrix,
    q: &GeneratorMatrix,
    preorder: Preorder,
    config: &Config,
) -> Result<ComparisonVerdict> {
    if p.space().states() != q.space().states() {
        return Err(Error::Validation(
            "generators must share an enumerated state space".into(),
        ));
    }
    let states = p.space().states();
    let sets = enumerate_upper_sets(states, preorder, config.upper_set_cap)?;
    let slack = config.rate_slack;

    let mut violations = Vec::new();
    for (i, x) in states.iter().enumerate() {
        for (j, y) in states.iter().enumerate() {
            if !preorder.holds(x, y) {
                continue;
            }
            let (px, qy) = (p.row(i), q.row(j));
            let into = sets.iter().find_map(|&u| {
                if u.contains(i) || u.contains(j) {
                    return None;
                }
                let (lhs, rhs) = (flow_into(px, u), flow_into(qy, u));
                (lhs > rhs + slack).then_some((u, lhs, rhs))
            });
            let out = sets.iter().find_map(|&u| {
                if !(u.contains(i) && u.contains(j)) {
                    return None;
                }
                let (lhs, rhs) = (flow_out_of(px, u), flow_out_of(qy, u));
                (lhs < rhs - slack).then_some((u, lhs, rhs))
            });
            for (condition, hit) in [("upper_set_inflow", into), ("upper_set_outflow", out)] {
                if let Some((u, lhs, rhs)) = hit {
                    violations.push(Violation {
                        x: Witness::State(x.clone()),
                        y: Witness::State(y.clone()),
                        condition: condition.into(),
                        lhs,
                        rhs,
                        upper_set: Some(u.ids()),
                    });
                }
            }
        }
    }
    Ok(ComparisonVerdict::from_violations(violations))
}
