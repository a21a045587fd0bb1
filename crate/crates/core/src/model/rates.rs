use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SystemParams;

use super::{Layer, Move, State};

/// Routing policy of the system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Arrivals try layer 1, then layer 2; customers never move.
    Overflow,
    /// As overflow, but a layer-2 customer moves to its dedicated pool
    /// as soon as a server there frees up.
    MaximumPacking,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Overflow => "overflow",
            Policy::MaximumPacking => "mp",
        })
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overflow" => Ok(Policy::Overflow),
            "mp" | "maximum-packing" | "packing" => Ok(Policy::MaximumPacking),
            other => Err(Error::Validation(format!("unknown policy {other:?}"))),
        }
    }
}

/// Where an arriving class-`k` customer ends up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// A dedicated server is free.
    A1,
    /// Dedicated servers busy, a shared server is free.
    A2,
    /// Blocked.
    B,
}

pub fn region_of(params: &SystemParams, x: &State, k: usize) -> Region {
    if x.x1[k] < params.dedicated()[k] {
        Region::A1
    } else if x.shared_total() < params.shared() {
        Region::A2
    } else {
        Region::B
    }
}

/// Rate of `x -> x + e_{layer,k}`. Identical under both policies.
pub fn upward_rate(params: &SystemParams, x: &State, layer: Layer, k: usize) -> f64 {
    let hit = matches!(
        (layer, region_of(params, x, k)),
        (Layer::Dedicated, Region::A1) | (Layer::Shared, Region::A2)
    );
    if hit {
        params.arrival_rates()[k]
    } else {
        0.0
    }
}

/// Rate of `x -> x - e_{layer,k}`.
///
/// Under maximum packing a layer-1 completion of class `k` while class-`k`
/// customers wait at layer 2 pulls one of them down, so the net move is
/// `-e_{2,k}`.
pub fn downward_rate(
    params: &SystemParams,
    policy: Policy,
    x: &State,
    layer: Layer,
    k: usize,
) -> f64 {
    let mu = params.service_rates()[k];
    let (x1, x2) = (x.x1[k] as f64, x.x2[k] as f64);
    match (policy, layer) {
        (Policy::Overflow, Layer::Dedicated) => mu * x1,
        (Policy::Overflow, Layer::Shared) => mu * x2,
        (Policy::MaximumPacking, Layer::Dedicated) => {
            if x.x2[k] == 0 {
                mu * x1
            } else {
                0.0
            }
        }
        (Policy::MaximumPacking, Layer::Shared) => {
            if x.x2[k] > 0 {
                mu * x1 + mu * x2
            } else {
                0.0
            }
        }
    }
}

pub fn rate_of(params: &SystemParams, policy: Policy, x: &State, mv: Move) -> f64 {
    if mv.up {
        upward_rate(params, x, mv.layer, mv.class)
    } else {
        downward_rate(params, policy, x, mv.layer, mv.class)
    }
}

/// Every strictly positive transition out of `x`: upward moves by class,
/// then downward moves by class and layer.
pub fn transition_rates(params: &SystemParams, policy: Policy, x: &State) -> Vec<(Move, f64)> {
    let layers = [Layer::Dedicated, Layer::Shared];
    let classes = 0..params.classes();
    let ups = classes
        .clone()
        .flat_map(|k| layers.map(|l| Move::arrival(l, k)));
    let downs = classes.flat_map(|k| layers.map(|l| Move::departure(l, k)));
    ups.chain(downs)
        .map(|mv| (mv, rate_of(params, policy, x, mv)))
        .filter(|&(_, r)| r > 0.0)
        .collect()
}

/// Whether `x` is in the recurrent set of the packing policy: every class
/// either fills its dedicated servers or has nobody at layer 2.
pub fn in_smp(params: &SystemParams, x: &State) -> bool {
    (0..params.classes()).all(|k| x.x1[k] == params.dedicated()[k] || x.x2[k] == 0)
}

/// Whether per-class totals `t` fit: `sum_k (t_k - m_k)^+ <= n`.
pub fn totals_fit(params: &SystemParams, totals: &[u32]) -> bool {
    totals.len() == params.classes()
        && totals
            .iter()
            .zip(params.dedicated())
            .map(|(&t, &m)| t.saturating_sub(m) as u64)
            .sum::<u64>()
            <= params.shared() as u64
}

/// The unique packed state with the given per-class totals.
pub fn repack(params: &SystemParams, totals: &[u32]) -> Result<State> {
    if !totals_fit(params, totals) {
        return Err(Error::Domain(format!(
            "per-class totals {totals:?} need more than {} shared servers",
            params.shared()
        )));
    }
    let (x1, x2) = totals
        .iter()
        .zip(params.dedicated())
        .map(|(&t, &m)| (t.min(m), t.saturating_sub(m)))
        .unzip();
    Ok(State::new(x1, x2))
}
