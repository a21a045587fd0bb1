use serde::Serialize;

use crate::error::Result;
use crate::exact::Pmf;
use crate::params::SystemParams;

use super::{erlang_b, erlang_distribution, erlang_mean, ErlangSpec};

/// A closed interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Erlang bounds on the number of class-`k` customers: the class alone on
/// its `m_k` dedicated servers from below, and on `m_k + n` servers from above.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerClassBounds {
    /// One-based class label.
    pub class: usize,
    pub lower_law: ErlangSpec,
    pub upper_law: ErlangSpec,
    #[serde(skip)]
    pub lower: Pmf,
    #[serde(skip)]
    pub upper: Pmf,
    pub mean_number: Interval,
    pub throughput: Interval,
    /// Endpoints swap: more servers means less blocking.
    pub blocking: Interval,
}

pub fn per_class_bounds(params: &SystemParams, k: usize) -> Result<PerClassBounds> {
    let load = params.load(k);
    let mu = params.service_rates()[k];
    let lower_law = ErlangSpec::new(params.dedicated()[k], load)?;
    let upper_law = ErlangSpec::new(params.dedicated()[k] + params.shared(), load)?;
    let (mean_lo, mean_hi) = (erlang_mean(lower_law), erlang_mean(upper_law));
    Ok(PerClassBounds {
        class: k + 1,
        lower_law,
        upper_law,
        lower: erlang_distribution(lower_law),
        upper: erlang_distribution(upper_law),
        mean_number: Interval {
            lower: mean_lo,
            upper: mean_hi,
        },
        throughput: Interval {
            lower: mu * mean_lo,
            upper: mu * mean_hi,
        },
        blocking: Interval {
            lower: erlang_b(upper_law),
            upper: erlang_b(lower_law),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_shared_servers_collapse_the_interval() {
        let p = SystemParams::new(vec![3, 1], 0, vec![2.0, 1.0], vec![1.0, 4.0]).unwrap();
        let b = per_class_bounds(&p, 0).unwrap();
        assert_eq!(b.lower, b.upper);
        assert_eq!(b.mean_number.width(), 0.0);
        assert_eq!(b.blocking.width(), 0.0);
    }

    #[test]
    fn blocking_endpoints_for_table1_class1() {
        // rho = 5 on 1 and 3 servers: b_Erl(1,5) = 5/6, b_Erl(3,5) = (125/6)/(236/6).
        let p = SystemParams::new(vec![1, 0], 2, vec![1.0, 1.0], vec![0.2, 10.0]).unwrap();
        let b = per_class_bounds(&p, 0).unwrap();
        assert!((b.blocking.upper - 5.0 / 6.0).abs() < 1e-15);
        assert!((b.blocking.lower - 125.0 / 236.0).abs() < 1e-15);
        assert!(b.mean_number.lower < b.mean_number.upper);
    }
}
