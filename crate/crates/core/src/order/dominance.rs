use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact::{Pmf, StateDistribution};
use crate::model::Preorder;

use super::{enumerate_upper_sets, ComparisonVerdict, Violation, Witness};

/// `d1 <=st d2` on the integers: `P(d1 > j) <= P(d2 > j) + slack` for all `j`.
/// Violations are reported at each failing `j`, with `x = y = j`.
pub fn dominates_integer(d1: &Pmf, d2: &Pmf, slack: f64) -> ComparisonVerdict {
    let len = d1.max_value().max(d2.max_value()) + 1;
    let violations = d1
        .ccdf_curve(len)
        .into_iter()
        .zip(d2.ccdf_curve(len))
        .enumerate()
        .filter(|&(_, (a, b))| a > b + slack)
        .map(|(j, (a, b))| Violation {
            x: Witness::Count(j),
            y: Witness::Count(j),
            condition: "ccdf".into(),
            lhs: a,
            rhs: b,
            upper_set: None,
        })
        .collect();
    ComparisonVerdict::from_violations(violations)
}

/// `d1 <=st d2` under `preorder`: `d1(U) <= d2(U) + slack` for every upper
/// set `U` of the shared state list.
pub fn dominates_preorder(
    d1: &StateDistribution,
    d2: &StateDistribution,
    preorder: Preorder,
    config: &Config,
) -> Result<ComparisonVerdict> {
    if d1.states() != d2.states() {
        return Err(Error::Validation(
            "distributions must share an enumerated support".into(),
        ));
    }
    let sets = enumerate_upper_sets(d1.states(), preorder, config.upper_set_cap)?;
    let mass = |d: &StateDistribution, members: &[usize]| -> f64 {
        members.iter().map(|&i| d.probs()[i]).sum()
    };
    let violations = sets
        .iter()
        .filter_map(|u| {
            let ids = u.ids();
            let (a, b) = (mass(d1, &ids), mass(d2, &ids));
            (a > b + config.dominance_slack).then(|| Violation {
                x: Witness::Set(ids.clone()),
                y: Witness::Set(ids.clone()),
                condition: "upper_set_mass".into(),
                lhs: a,
                rhs: b,
                upper_set: Some(ids),
            })
        })
        .collect();
    Ok(ComparisonVerdict::from_violations(violations))
}
