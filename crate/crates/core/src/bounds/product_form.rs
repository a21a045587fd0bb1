use crate::error::{Error, Result};
use crate::exact::StateDistribution;
use crate::model::repack;
use crate::params::SystemParams;

/// Per-class totals `t` with `sum_k (t_k - m_k)^+ <= n`, lexicographically.
/// Fails once more than `cap` vectors have been produced.
pub fn packed_totals(params: &SystemParams, cap: usize) -> Result<Vec<Vec<u32>>> {
    fn rec(
        m: &[u32],
        budget: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        cap: usize,
    ) -> Result<()> {
        let Some((&mk, rest)) = m.split_first() else {
            if out.len() == cap {
                return Err(Error::capacity("packed state space", cap as u128 + 1, cap));
            }
            out.push(prefix.clone());
            return Ok(());
        };
        for t in 0..=mk + budget {
            prefix.push(t);
            rec(rest, budget - t.saturating_sub(mk), prefix, out, cap)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(
        params.dedicated(),
        params.shared(),
        &mut Vec::with_capacity(params.classes()),
        &mut out,
        cap,
    )?;
    Ok(out)
}

/// Stationary law of the maximum-packing system from its product form:
/// `pi(t) ~ prod_k rho_k^{t_k} / t_k!` on the packed totals, mapped to
/// states by repacking.
///
/// Weights are accumulated in log space against a running maximum.
pub fn mp_stationary(params: &SystemParams, cap: usize) -> Result<StateDistribution> {
    let totals = packed_totals(params, cap)?;
    let top = totals.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut log_fact = vec![0.0f64; top + 1];
    for i in 1..=top {
        log_fact[i] = log_fact[i - 1] + (i as f64).ln();
    }
    let log_load: Vec<f64> = (0..params.classes()).map(|k| params.load(k).ln()).collect();

    let mut log_weights = Vec::with_capacity(totals.len());
    let mut running_max = f64::NEG_INFINITY;
    let mut scaled_sum = 0.0;
    for t in &totals {
        let lw: f64 = t
            .iter()
            .zip(&log_load)
            .map(|(&tk, &lr)| tk as f64 * lr - log_fact[tk as usize])
            .sum();
        if lw > running_max {
            scaled_sum = scaled_sum * (running_max - lw).exp() + 1.0;
            running_max = lw;
        } else {
            scaled_sum += (lw - running_max).exp();
        }
        log_weights.push(lw);
    }

    let states = totals
        .iter()
        .map(|t| repack(params, t))
        .collect::<Result<Vec<_>>>()?;
    let probs = log_weights
        .into_iter()
        .map(|lw| (lw - running_max).exp() / scaled_sum)
        .collect();
    Ok(StateDistribution::new(states, probs))
}
