use crate::error::{Error, Result};
use crate::model::{region_of, Layer, Move, Region, State};
use crate::params::SystemParams;

use super::race::{race, Snapshots};
use super::simulate::check_horizon;
use super::{stream, CoupledEvent, CoupledPath, CouplingKind, CouplingOptions, CouplingRun};

/// One joint move: the change of `x` and the change of `y`.
type Joint = (&'static str, Option<Move>, i32, f64);

fn transitions(params: &SystemParams, c: usize, cap: u32, x: &State, y: u32) -> Vec<Joint> {
    let mut out = Vec::new();
    let lambda = params.arrival_rates();
    let mu = params.service_rates();
    for k in 0..params.classes() {
        let region = region_of(params, x, k);
        let admit = match region {
            Region::A1 => Some(Move::arrival(Layer::Dedicated, k)),
            Region::A2 => Some(Move::arrival(Layer::Shared, k)),
            Region::B => None,
        };
        if k == c {
            match (admit, y < cap) {
                (Some(mv), true) => out.push(("1", Some(mv), 1, lambda[k])),
                (Some(mv), false) => out.push(("2", Some(mv), 0, lambda[k])),
                (None, true) => out.push(("3", None, 1, lambda[k])),
                (None, false) => {}
            }
            for layer in [Layer::Dedicated, Layer::Shared] {
                let count = x.layer(layer)[k];
                out.push(("4", Some(Move::departure(layer, k)), -1, mu[k] * count as f64));
            }
            let spare = y - x.class_total(k);
            out.push(("5", None, -1, mu[k] * spare as f64));
        } else {
            if let Some(mv) = admit {
                out.push(("6", Some(mv), 0, lambda[k]));
            }
            for layer in [Layer::Dedicated, Layer::Shared] {
                let count = x.layer(layer)[k];
                out.push(("7", Some(Move::departure(layer, k)), 0, mu[k] * count as f64));
            }
        }
    }
    out
}

fn columns(k: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=k).map(|c| format!("x1_{c}")).collect();
    v.extend((1..=k).map(|c| format!("x2_{c}")));
    v
}

fn components(x: &State) -> Vec<u32> {
    x.x1.iter().chain(&x.x2).copied().collect()
}

/// Couples the overflow system `x` with the Erlang loss system `y` on
/// `m[class] + n` servers fed by class `class` alone. After every event
/// `x1[class] + x2[class] <= y <= m[class] + n` must hold.
///
/// The default initial pair is both systems empty.
pub fn simulate_perclass_coupling(
    params: &SystemParams,
    class: usize,
    initial: Option<(State, u32)>,
    options: &CouplingOptions,
) -> Result<CouplingRun> {
    check_horizon(options.horizon)?;
    let k = params.classes();
    if class >= k {
        return Err(Error::Validation(format!("class {} out of range", class + 1)));
    }
    let cap = params.dedicated()[class] + params.shared();
    let in_s2 = |x: &State, y: u32| x.is_valid(params) && x.class_total(class) <= y && y <= cap;
    let (mut x, mut y) = initial.unwrap_or_else(|| (State::empty(k), 0));
    if x.classes() != k || !in_s2(&x, y) {
        return Err(Error::Validation(
            "initial pair must lie in the coupled state space".into(),
        ));
    }

    let mut rng = stream(options.seed, options.stream);
    let mut path = options.record_path.then(|| CoupledPath {
        kind: CouplingKind::PerClass,
        x_columns: columns(k),
        y_columns: vec!["y".into()],
        events: vec![CoupledEvent {
            time: 0.0,
            x: components(&x),
            y: vec![y],
            violation: false,
        }],
    });
    let mut x_snaps = Snapshots::new(options.snapshot_spacing);
    let mut y_snaps = Snapshots::new(options.snapshot_spacing);
    let (mut area_x, mut area_y) = (0.0, 0.0);
    let mut min_gap = y as i64 - x.class_total(class) as i64;
    let mut t = 0.0;
    let mut events: u64 = 0;

    loop {
        let table = transitions(params, class, cap, &x, y);
        let rates: Vec<f64> = table.iter().map(|e| e.3).collect();
        let (end, winner) = match race(&mut rng, &rates) {
            Some((dt, i)) if t + dt <= options.horizon => (t + dt, Some(i)),
            _ => (options.horizon, None),
        };
        area_x += (end - t) * x.class_total(class) as f64;
        area_y += (end - t) * y as f64;
        x_snaps.cover(end, || components(&x));
        y_snaps.cover(end, || vec![y]);
        let Some(i) = winner else {
            break;
        };
        let (family, mv, dy, _) = table[i];
        t = end;
        events += 1;
        let nx = match mv {
            Some(mv) => x.apply(mv),
            None => Some(x.clone()),
        };
        let ny = y.checked_add_signed(dy);
        match (nx, ny) {
            (Some(nx), Some(ny)) if in_s2(&nx, ny) => {
                x = nx;
                y = ny;
            }
            (nx, ny) => {
                return Err(Error::CouplingViolation {
                    event: events as usize,
                    time: t,
                    detail: format!(
                        "family {family} maps ({x}, {y}) to ({}, {})",
                        nx.map_or("-".into(), |s| s.to_string()),
                        ny.map_or("-".into(), |v| v.to_string())
                    ),
                })
            }
        }
        min_gap = min_gap.min(y as i64 - x.class_total(class) as i64);
        if let Some(p) = path.as_mut() {
            p.events.push(CoupledEvent {
                time: t,
                x: components(&x),
                y: vec![y],
                violation: false,
            });
        }
    }

    let scale = if options.horizon > 0.0 { 1.0 / options.horizon } else { 0.0 };
    Ok(CouplingRun {
        kind: CouplingKind::PerClass,
        events,
        mean_x: area_x * scale,
        mean_y: area_y * scale,
        min_gap,
        x_snapshots: x_snaps.taken,
        y_snapshots: y_snaps.taken,
        path,
    })
}
