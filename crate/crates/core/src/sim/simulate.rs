use rand::Rng;
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{transition_rates, Policy, State};
use crate::params::SystemParams;

use super::race::{race, Snapshots};
use super::{stream, EventPath};

pub(crate) fn check_horizon(horizon: f64) -> Result<()> {
    if horizon.is_finite() && horizon >= 0.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "horizon must be finite and nonnegative, got {horizon}"
        )))
    }
}

/// Jump-chain simulation on `[0, horizon]`. `sojourn(end, x)` is called for
/// every stretch the path spends at `x`, ending at `end`; `jump(t, x)` after
/// every event. Returns the number of events.
fn run<R: Rng + ?Sized>(
    params: &SystemParams,
    policy: Policy,
    initial: State,
    horizon: f64,
    rng: &mut R,
    mut sojourn: impl FnMut(f64, f64, &State),
    mut jump: impl FnMut(f64, &State),
) -> u64 {
    let mut x = initial;
    let mut t = 0.0;
    let mut events = 0;
    loop {
        let moves = transition_rates(params, policy, &x);
        let rates: Vec<f64> = moves.iter().map(|&(_, r)| r).collect();
        match race(rng, &rates) {
            Some((dt, i)) if t + dt <= horizon => {
                sojourn(t, t + dt, &x);
                t += dt;
                x = x.apply(moves[i].0).expect("positive rates stay in S");
                events += 1;
                jump(t, &x);
            }
            _ => {
                sojourn(t, horizon, &x);
                return events;
            }
        }
    }
}

fn check_initial(params: &SystemParams, initial: &State) -> Result<()> {
    if initial.classes() == params.classes() && initial.is_valid(params) {
        Ok(())
    } else {
        Err(Error::Validation(format!("initial state {initial} is not in S")))
    }
}

/// A full sample path from the empty state, driven by stream `(seed, 0)`.
pub fn simulate(
    params: &SystemParams,
    policy: Policy,
    horizon: f64,
    seed: u64,
) -> Result<EventPath> {
    simulate_from(
        params,
        policy,
        State::empty(params.classes()),
        horizon,
        &mut stream(seed, 0),
    )
}

pub fn simulate_from<R: Rng + ?Sized>(
    params: &SystemParams,
    policy: Policy,
    initial: State,
    horizon: f64,
    rng: &mut R,
) -> Result<EventPath> {
    check_horizon(horizon)?;
    check_initial(params, &initial)?;
    let mut path = EventPath::new(initial.clone());
    run(params, policy, initial, horizon, rng, |_, _, _| {}, |t, x| {
        path.push(t, x.clone())
    });
    Ok(path)
}

/// Time averages of one run, without storing the path.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub events: u64,
    pub horizon: f64,
    /// Time average of `|x|`.
    pub mean_total: f64,
    /// Time average of `x1[k] + x2[k]`.
    pub class_means: Vec<f64>,
    /// The state at times `spacing, 2 spacing, ...` when requested.
    pub snapshots: Vec<State>,
}

pub fn summarize_run<R: Rng + ?Sized>(
    params: &SystemParams,
    policy: Policy,
    horizon: f64,
    snapshot_spacing: Option<f64>,
    rng: &mut R,
) -> Result<RunSummary> {
    check_horizon(horizon)?;
    let k = params.classes();
    let mut area = vec![0.0; k];
    let mut snaps = Snapshots::new(snapshot_spacing);
    let events = run(
        params,
        policy,
        State::empty(k),
        horizon,
        rng,
        |start, end, x| {
            for (c, a) in area.iter_mut().enumerate() {
                *a += (end - start) * x.class_total(c) as f64;
            }
            snaps.cover(end, || x.clone());
        },
        |_, _| {},
    );
    let scale = if horizon > 0.0 { 1.0 / horizon } else { 0.0 };
    let class_means: Vec<f64> = area.iter().map(|a| a * scale).collect();
    Ok(RunSummary {
        events,
        horizon,
        mean_total: class_means.iter().sum(),
        class_means,
        snapshots: snaps.taken,
    })
}

/// Independent replications of a scalar estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationSummary {
    pub values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(reps)`.
    pub std_error: f64,
}

impl ReplicationSummary {
    pub fn from_values(values: Vec<f64>) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            values,
            mean,
            std_error: (var / n).sqrt(),
        }
    }

    /// Whether `target` lies within `width` standard errors of the mean.
    pub fn covers(&self, target: f64, width: f64) -> bool {
        (self.mean - target).abs() <= width * self.std_error
    }
}

/// Runs `estimate` on streams `(seed, 0..reps)` in parallel. Results are
/// ordered by replication index.
pub fn replicate<F>(seed: u64, reps: u64, estimate: F) -> Result<ReplicationSummary>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    if reps == 0 {
        return Err(Error::Validation("at least one replication is needed".into()));
    }
    let values = (0..reps)
        .into_par_iter()
        .map(|rep| estimate(&mut stream(seed, rep)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicationSummary::from_values(values))
}

/// Time-averaged `|x|` over `reps` runs from the empty state.
pub fn replicate_mean_total(
    params: &SystemParams,
    policy: Policy,
    horizon: f64,
    seed: u64,
    reps: u64,
) -> Result<ReplicationSummary> {
    replicate(seed, reps, |rng| {
        summarize_run(params, policy, horizon, None, rng).map(|s| s.mean_total)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm11() -> SystemParams {
        SystemParams::new(vec![1], 0, vec![1.0], vec![1.0]).unwrap()
    }

    #[test]
    fn zero_horizon_is_the_initial_state() {
        let p = simulate(&mm11(), Policy::Overflow, 0.0, 3).unwrap();
        assert_eq!(p.len(), 1);
        assert!(simulate(&mm11(), Policy::Overflow, -1.0, 3).is_err());
    }

    #[test]
    fn paths_are_unit_moves_in_s() {
        let params = SystemParams::new(vec![1, 2], 2, vec![1.5, 2.0], vec![1.0, 0.5]).unwrap();
        for policy in [Policy::Overflow, Policy::MaximumPacking] {
            let p = simulate(&params, policy, 200.0, 11).unwrap();
            assert!(p.len() > 100);
            for w in p.events().windows(2) {
                assert!(w[0].time < w[1].time);
                assert!(w[1].state.is_valid(&params));
                let diff: i64 = w[0]
                    .state
                    .x1
                    .iter()
                    .chain(&w[0].state.x2)
                    .zip(w[1].state.x1.iter().chain(&w[1].state.x2))
                    .map(|(&a, &b)| (a as i64 - b as i64).abs())
                    .sum();
                assert_eq!(diff, 1);
            }
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let a = simulate(&mm11(), Policy::Overflow, 50.0, 5).unwrap();
        let b = simulate(&mm11(), Policy::Overflow, 50.0, 5).unwrap();
        assert_eq!(a, b);
        let c = simulate(&mm11(), Policy::Overflow, 50.0, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_server_occupancy() {
        let s = summarize_run(&mm11(), Policy::Overflow, 1e5, None, &mut stream(2, 0)).unwrap();
        assert!((s.mean_total - 0.5).abs() < 0.01, "{}", s.mean_total);
    }

    #[test]
    fn blocked_system_holds_still() {
        let p = SystemParams::new(vec![0], 0, vec![1.0], vec![1.0]).unwrap();
        let path = simulate(&p, Policy::Overflow, 10.0, 1).unwrap();
        assert_eq!(path.len(), 1);
    }
}
