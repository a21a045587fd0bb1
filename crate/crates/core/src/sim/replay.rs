use std::collections::BTreeSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Policy, State};
use crate::params::SystemParams;

use super::EventPath;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduledArrival {
    pub time: f64,
    /// Zero-based class index.
    pub class: usize,
    pub duration: f64,
}

/// A fixed list of arrivals with their service durations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplaySchedule {
    arrivals: Vec<ScheduledArrival>,
}

#[derive(Deserialize)]
struct CsvRow {
    time: f64,
    class: usize,
    duration: f64,
}

impl ReplaySchedule {
    pub fn new(arrivals: Vec<ScheduledArrival>) -> Result<Self> {
        for (i, a) in arrivals.iter().enumerate() {
            if !(a.time.is_finite() && a.time >= 0.0) {
                return Err(Error::Schedule(format!("row {}: arrival time {}", i + 1, a.time)));
            }
            if !(a.duration.is_finite() && a.duration >= 0.0) {
                return Err(Error::Schedule(format!("row {}: duration {}", i + 1, a.duration)));
            }
        }
        Ok(Self { arrivals })
    }

    /// Reads `time,class,duration` rows with one-based class labels.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, row) in csv::Reader::from_reader(input).deserialize::<CsvRow>().enumerate() {
            let row = row?;
            if row.class == 0 {
                return Err(Error::Schedule(format!("row {}: classes are one-based", i + 1)));
            }
            rows.push(ScheduledArrival {
                time: row.time,
                class: row.class - 1,
                duration: row.duration,
            });
        }
        Self::new(rows)
    }

    pub fn arrivals(&self) -> &[ScheduledArrival] {
        &self.arrivals
    }
}

/// How a replayed system treats arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplayRule {
    Routing(Policy),
    /// Only class `k` is admitted, to a pool of `m_k + n` servers. Paths are
    /// reported as states of the one-class system with `m = (m_k + n)` and
    /// no shared servers.
    SingleClass(usize),
}

#[derive(Debug, Clone, Copy)]
struct Customer {
    class: usize,
    shared: bool,
    departs: f64,
}

/// Deterministic replay of `schedule` from the empty state.
///
/// Events at equal times are processed departures first, in order of
/// admission, then arrivals in schedule order. Under maximum packing a
/// layer-1 completion immediately pulls the earliest-admitted class-`k`
/// customer at layer 2 down to layer 1; since that customer keeps its
/// departure time, the combined step is recorded as the single move
/// `-e_{2,k}`. Blocked arrivals leave no row.
pub fn replay(params: &SystemParams, rule: ReplayRule, schedule: &ReplaySchedule) -> Result<EventPath> {
    let (system, policy, admitted): (SystemParams, Policy, Option<usize>) = match rule {
        ReplayRule::Routing(policy) => (params.clone(), policy, None),
        ReplayRule::SingleClass(k) => {
            if k >= params.classes() {
                return Err(Error::Validation(format!("class {} out of range", k + 1)));
            }
            let one = SystemParams::new(
                vec![params.dedicated()[k] + params.shared()],
                0,
                vec![params.arrival_rates()[k]],
                vec![params.service_rates()[k]],
            )?;
            (one, Policy::Overflow, Some(k))
        }
    };
    if let Some(a) = schedule
        .arrivals()
        .iter()
        .find(|a| a.class >= params.classes())
    {
        return Err(Error::Schedule(format!(
            "class {} does not exist in a {}-class system",
            a.class + 1,
            params.classes()
        )));
    }

    let mut arrivals: Vec<ScheduledArrival> = schedule
        .arrivals()
        .iter()
        .filter(|a| admitted.is_none_or(|k| a.class == k))
        .map(|a| ScheduledArrival {
            class: if admitted.is_some() { 0 } else { a.class },
            ..*a
        })
        .collect();
    arrivals.sort_by(|a, b| a.time.total_cmp(&b.time));

    let m = system.dedicated().to_vec();
    let n = system.shared();
    let mut x = State::empty(system.classes());
    let mut path = EventPath::new(x.clone());
    let mut customers: Vec<Customer> = Vec::new();
    // (departure time bits, admission index); nonnegative floats order like their bits.
    let mut pending: BTreeSet<(u64, usize)> = BTreeSet::new();
    let mut next_arrival = 0;

    loop {
        let next_departure = pending.first().map(|&(bits, _)| f64::from_bits(bits));
        let arrival_time = arrivals.get(next_arrival).map(|a| a.time);
        match (next_departure, arrival_time) {
            (None, None) => break,
            (Some(td), ta) if ta.is_none_or(|ta| td <= ta) => {
                let (_, id) = pending.pop_first().unwrap();
                let c = customers[id];
                if c.shared {
                    x.x2[c.class] -= 1;
                } else if policy == Policy::MaximumPacking && x.x2[c.class] > 0 {
                    let moved = (0..customers.len())
                        .find(|&j| {
                            let d = customers[j];
                            d.shared
                                && d.class == c.class
                                && pending.contains(&(d.departs.to_bits(), j))
                        })
                        .expect("layer-2 count matches pending customers");
                    customers[moved].shared = false;
                    x.x2[c.class] -= 1;
                } else {
                    x.x1[c.class] -= 1;
                }
                path.push(td, x.clone());
            }
            (_, Some(ta)) => {
                let a = arrivals[next_arrival];
                next_arrival += 1;
                let k = a.class;
                let shared = if x.x1[k] < m[k] {
                    false
                } else if x.shared_total() < n {
                    true
                } else {
                    continue;
                };
                if shared {
                    x.x2[k] += 1;
                } else {
                    x.x1[k] += 1;
                }
                let departs = ta + a.duration;
                pending.insert((departs.to_bits(), customers.len()));
                customers.push(Customer {
                    class: k,
                    shared,
                    departs,
                });
                path.push(ta, x.clone());
            }
            (Some(_), None) => unreachable!(),
        }
    }
    Ok(path)
}

/// The built-in schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedSchedule {
    /// Packing ends below overflow on one sample path.
    Example1,
    /// The per-class Erlang comparison fails on one sample path.
    Example2,
}

impl fmt::Display for NamedSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamedSchedule::Example1 => "example1",
            NamedSchedule::Example2 => "example2",
        })
    }
}

impl FromStr for NamedSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example1" => Ok(NamedSchedule::Example1),
            "example2" => Ok(NamedSchedule::Example2),
            other => Err(Error::Validation(format!(
                "unknown schedule {other:?}, expected example1 or example2"
            ))),
        }
    }
}

/// Paths of a named replay and the observation that makes the point.
#[derive(Debug, Clone)]
pub struct NamedReplay {
    pub name: NamedSchedule,
    pub params: SystemParams,
    pub schedule: ReplaySchedule,
    pub observe_at: f64,
    /// `(label, path)` for each compared system.
    pub paths: Vec<(String, EventPath)>,
    /// `(quantity, value)` read off at `observe_at`, e.g. `("X(6)", "e_{1,1}")`.
    pub observations: Vec<(String, String)>,
}

impl NamedReplay {
    pub fn summary(&self) -> String {
        self.observations
            .iter()
            .map(|(q, v)| format!("{q} = {v}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn arrivals(rows: &[(f64, usize, f64)]) -> ReplaySchedule {
    ReplaySchedule::new(
        rows.iter()
            .map(|&(time, class, duration)| ScheduledArrival {
                time,
                class,
                duration,
            })
            .collect(),
    )
    .expect("built-in schedules are valid")
}

pub fn run_named(name: NamedSchedule) -> Result<NamedReplay> {
    match name {
        NamedSchedule::Example1 => {
            // Class-1 arrivals at 0, 2, 4 and a class-2 arrival at 3, all of
            // length 3, on m = (1, 0), n = 1.
            let params = SystemParams::new(vec![1, 0], 1, vec![1.0, 1.0], vec![1.0, 1.0])?;
            let schedule = arrivals(&[(0.0, 0, 3.0), (2.0, 0, 3.0), (3.0, 1, 3.0), (4.0, 0, 3.0)]);
            let x = replay(&params, ReplayRule::Routing(Policy::Overflow), &schedule)?;
            let xmp = replay(&params, ReplayRule::Routing(Policy::MaximumPacking), &schedule)?;
            let t = 6.0;
            let observations = vec![
                ("X(6)".into(), x.state_at(t).unit_form()),
                ("Xmp(6)".into(), xmp.state_at(t).unit_form()),
            ];
            Ok(NamedReplay {
                name,
                params,
                schedule,
                observe_at: t,
                paths: vec![("X".into(), x), ("Xmp".into(), xmp)],
                observations,
            })
        }
        NamedSchedule::Example2 => {
            // A class-2 arrival at 0 and class-1 arrivals at 1 and 2, all of
            // length 2, on m = (0, 0), n = 1.
            let params = SystemParams::new(vec![0, 0], 1, vec![1.0, 1.0], vec![1.0, 1.0])?;
            let schedule = arrivals(&[(0.0, 1, 2.0), (1.0, 0, 2.0), (2.0, 0, 2.0)]);
            let x = replay(&params, ReplayRule::Routing(Policy::Overflow), &schedule)?;
            let z = replay(&params, ReplayRule::SingleClass(0), &schedule)?;
            let t = 3.0;
            let observations = vec![
                ("X_{2,1}(3)".into(), x.state_at(t).x2[0].to_string()),
                ("Z(3)".into(), z.state_at(t).total().to_string()),
            ];
            Ok(NamedReplay {
                name,
                params,
                schedule,
                observe_at: t,
                paths: vec![("X".into(), x), ("Z".into(), z)],
                observations,
            })
        }
    }
}
