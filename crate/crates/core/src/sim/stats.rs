use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exact::StateDistribution;
use crate::model::State;

/// Pearson goodness of fit of sampled categories against a law.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub samples: usize,
    /// Bins after pooling.
    pub bins: usize,
}

impl GoodnessOfFit {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Minimum expected count of a bin; rarer categories are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

/// Chi-square test of `samples` against `law`. Categories with expected
/// count below [`MIN_EXPECTED`] are pooled, rarest first, until the pool
/// reaches it; a pool that stays short is merged into the smallest bin.
/// A sample outside the support of `law` gives `p = 0`.
pub fn chi_square_fit<K: Ord + Clone>(
    samples: &[K],
    law: &BTreeMap<K, f64>,
) -> Result<GoodnessOfFit> {
    if samples.is_empty() {
        return Err(Error::Validation("no samples to test".into()));
    }
    let n = samples.len() as f64;
    let mut observed: BTreeMap<&K, u64> = BTreeMap::new();
    for s in samples {
        *observed.entry(s).or_default() += 1;
    }
    if observed
        .keys()
        .any(|k| law.get(*k).is_none_or(|&p| p <= 0.0))
    {
        return Ok(GoodnessOfFit {
            statistic: f64::INFINITY,
            dof: law.len().saturating_sub(1),
            p_value: 0.0,
            samples: samples.len(),
            bins: law.len(),
        });
    }

    let mut cells: Vec<(f64, f64)> = law
        .iter()
        .filter(|(_, &p)| p > 0.0)
        .map(|(k, &p)| (n * p, observed.get(k).copied().unwrap_or(0) as f64))
        .collect();
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pool = (0.0, 0.0);
    for (e, o) in cells {
        if e >= MIN_EXPECTED && pool.0 == 0.0 {
            bins.push((e, o));
        } else {
            pool = (pool.0 + e, pool.1 + o);
            if pool.0 >= MIN_EXPECTED {
                bins.push(pool);
                pool = (0.0, 0.0);
            }
        }
    }
    if pool.0 > 0.0 {
        match bins.first_mut() {
            Some(b) => *b = (b.0 + pool.0, b.1 + pool.1),
            None => bins.push(pool),
        }
    }

    let statistic: f64 = bins.iter().map(|&(e, o)| (o - e).powi(2) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let chi = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        chi.sf(statistic)
    };
    Ok(GoodnessOfFit {
        statistic,
        dof,
        p_value,
        samples: samples.len(),
        bins: bins.len(),
    })
}

/// Pushes a state law forward through `key`.
pub fn law_of<K: Ord>(pi: &StateDistribution, key: impl Fn(&State) -> K) -> BTreeMap<K, f64> {
    let mut out = BTreeMap::new();
    for (x, p) in pi.iter() {
        *out.entry(key(x)).or_insert(0.0) += p;
    }
    out
}
