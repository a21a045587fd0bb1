use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::exact::{Pmf, Projection, Solution};
use crate::params::SystemParams;

use super::{overall_bounds, per_class_bounds, Interval, OverallBounds, PerClassBounds};

/// Allowed excess of an exact scalar over its bound, covering solver error.
pub const SCALAR_SLACK: f64 = 1e-9;

/// Every per-class and overall bound of one system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub system: SystemParams,
    pub per_class: Vec<PerClassBounds>,
    pub overall: OverallBounds,
}

pub fn bounds_report(params: &SystemParams, config: &Config) -> Result<BoundsReport> {
    let per_class = (0..params.classes())
        .map(|k| per_class_bounds(params, k))
        .collect::<Result<_>>()?;
    Ok(BoundsReport {
        system: params.clone(),
        per_class,
        overall: overall_bounds(params, config)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichViolation {
    pub quantity: String,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

fn check_scalar(out: &mut Vec<SandwichViolation>, quantity: String, bound: Interval, value: f64) {
    if !bound.contains(value, SCALAR_SLACK) {
        out.push(SandwichViolation {
            quantity,
            lower: bound.lower,
            value,
            upper: bound.upper,
        });
    }
}

fn check_envelope(
    out: &mut Vec<SandwichViolation>,
    label: &str,
    lower: &Pmf,
    exact: &Pmf,
    upper: &Pmf,
    slack: f64,
) {
    let len = lower.probs().len().max(exact.probs().len()).max(upper.probs().len());
    let (lo, ex, hi) = (lower.ccdf_curve(len), exact.ccdf_curve(len), upper.ccdf_curve(len));
    for j in 0..len {
        if ex[j] < lo[j] - slack || ex[j] > hi[j] + slack {
            out.push(SandwichViolation {
                quantity: format!("{label} P(X > {j})"),
                lower: lo[j],
                value: ex[j],
                upper: hi[j],
            });
        }
    }
}

/// Every place where an exact solution of the overflow system escapes its
/// bounds: per-class CCDF envelopes and scalar intervals, then the overall
/// intervals and the envelope of `|x|`.
pub fn check_sandwich(report: &BoundsReport, exact: &Solution, config: &Config) -> Vec<SandwichViolation> {
    let mut out = Vec::new();
    let pi = exact.distribution();
    for (b, m) in report.per_class.iter().zip(&exact.metrics.per_class) {
        let k = b.class;
        let marginal = pi.marginal(Projection::Class(k - 1));
        check_envelope(&mut out, &format!("class {k}"), &b.lower, &marginal, &b.upper, config.dominance_slack);
        check_scalar(&mut out, format!("class {k} mean number"), b.mean_number, m.mean);
        check_scalar(&mut out, format!("class {k} throughput"), b.throughput, m.throughput);
        check_scalar(&mut out, format!("class {k} blocking"), b.blocking, m.blocking);
    }
    let o = &report.overall;
    let m = &exact.metrics;
    check_scalar(&mut out, "mean number".into(), o.mean_number, m.mean);
    check_scalar(&mut out, "throughput".into(), o.throughput, m.throughput);
    check_scalar(&mut out, "blocking".into(), o.blocking, m.blocking);
    let total = pi.marginal(Projection::Overall);
    check_envelope(&mut out, "total", &o.lower, &total, &o.upper, config.dominance_slack);
    out
}
