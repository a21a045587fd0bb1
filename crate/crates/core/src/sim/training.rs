use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Region, State};
use crate::params::SystemParams;

use super::race::{race, Snapshots};
use super::simulate::check_horizon;
use super::{stream, CoupledEvent, CoupledPath, CouplingKind, CouplingOptions, CouplingRun};

/// A state with layer 2 aggregated: per-class layer-1 counts and the total
/// number of customers at layer 2. With equal service rates this is again a
/// Markov process.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Aggregated {
    pub x1: Vec<u32>,
    pub x2: u32,
}

impl Aggregated {
    pub fn empty(classes: usize) -> Self {
        Self {
            x1: vec![0; classes],
            x2: 0,
        }
    }

    pub fn from_state(x: &State) -> Self {
        Self {
            x1: x.x1.clone(),
            x2: x.shared_total(),
        }
    }

    pub fn total(&self) -> u32 {
        self.x1.iter().sum::<u32>() + self.x2
    }

    fn fits(&self, m: &[u32], n: u32) -> bool {
        self.x1.len() == m.len() && self.x1.iter().zip(m).all(|(a, b)| a <= b) && self.x2 <= n
    }

    fn region(&self, m: &[u32], n: u32, k: usize) -> Region {
        if self.x1[k] < m[k] {
            Region::A1
        } else if self.x2 < n {
            Region::A2
        } else {
            Region::B
        }
    }

    fn components(&self) -> Vec<u32> {
        let mut v = self.x1.clone();
        v.push(self.x2);
        v
    }

    fn step(&self, delta: Step) -> Option<Self> {
        let mut next = self.clone();
        match delta {
            Step::Stay => {}
            Step::Up1(k) => next.x1[k] += 1,
            Step::Up2 => next.x2 += 1,
            Step::Down1(k) => next.x1[k] = next.x1[k].checked_sub(1)?,
            Step::Down2 => next.x2 = next.x2.checked_sub(1)?,
        }
        Some(next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Stay,
    Up1(usize),
    Up2,
    Down1(usize),
    Down2,
}

/// `y - x` in `{0, e_2, e_2 - e_{1,c}, 2 e_2 - e_{1,c}}`.
pub fn in_delta(x: &Aggregated, y: &Aggregated, c: usize) -> bool {
    let others_equal = (0..x.x1.len()).all(|k| k == c || x.x1[k] == y.x1[k]);
    let d1 = y.x1[c] as i64 - x.x1[c] as i64;
    let d2 = y.x2 as i64 - x.x2 as i64;
    others_equal && matches!((d1, d2), (0, 0) | (0, 1) | (-1, 1) | (-1, 2))
}

/// Joint transitions out of `(x, y)` with their family labels.
fn transitions(
    params: &SystemParams,
    c: usize,
    (m, n): (&[u32], u32),
    (my, ny): (&[u32], u32),
    x: &Aggregated,
    y: &Aggregated,
) -> std::result::Result<Vec<(&'static str, Step, Step, f64)>, String> {
    let mu = params.service_rates()[0];
    let lambda = params.arrival_rates();
    let mut out = Vec::new();
    for (l, &rate) in lambda.iter().enumerate() {
        let (family, dx, dy) = match (x.region(m, n, l), y.region(my, ny, l)) {
            (Region::A1, Region::A1) => ("A1", Step::Up1(l), Step::Up1(l)),
            (Region::A1, Region::A2) => ("A2", Step::Up1(l), Step::Up2),
            (Region::A1, Region::B) => ("A3", Step::Up1(l), Step::Stay),
            (Region::A2, Region::A2) => ("A4", Step::Up2, Step::Up2),
            (Region::A2, Region::B) => ("A5", Step::Up2, Step::Stay),
            (Region::B, Region::A2) => ("A6", Step::Stay, Step::Up2),
            (Region::B, Region::B) => continue,
            (rx, ry) => {
                return Err(format!(
                    "class {} arrival sees regions {rx:?} / {ry:?}, outside every joint family",
                    l + 1
                ))
            }
        };
        out.push((family, dx, dy, rate));
    }
    if y.x1[c] > x.x1[c] || y.x1[c] + y.x2 < x.x1[c] + x.x2 {
        return Err("negative departure rate".into());
    }
    for (k, &yk) in y.x1.iter().enumerate() {
        out.push(("D1", Step::Down1(k), Step::Down1(k), mu * yk as f64));
    }
    out.push(("D2", Step::Down1(c), Step::Down2, mu * (x.x1[c] - y.x1[c]) as f64));
    out.push(("D3", Step::Down2, Step::Down2, mu * x.x2 as f64));
    out.push((
        "D4",
        Step::Stay,
        Step::Down2,
        mu * (y.x1[c] + y.x2 - x.x1[c] - x.x2) as f64,
    ));
    Ok(out)
}

fn columns(prefix: &str, k: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=k).map(|c| format!("{prefix}1_{c}")).collect();
    v.push(format!("{prefix}2"));
    v
}

/// Couples the `(m, n)` overflow system `x` with the system `y` in which one
/// class-`class` dedicated server has moved to layer 2, both aggregated over
/// layer-2 classes. After every event `y - x` must lie in the admissible
/// difference set, so `|x| <= |y|` along the whole path.
///
/// Requires equal service rates and `m[class] >= 1`. The default initial pair
/// is both systems empty.
pub fn simulate_training_coupling(
    params: &SystemParams,
    class: usize,
    initial: Option<(Aggregated, Aggregated)>,
    options: &CouplingOptions,
) -> Result<CouplingRun> {
    check_horizon(options.horizon)?;
    let k = params.classes();
    if class >= k {
        return Err(Error::Validation(format!("class {} out of range", class + 1)));
    }
    if !params.has_equal_service_rates() {
        return Err(Error::Validation(
            "the reconfiguration coupling needs equal service rates".into(),
        ));
    }
    let m = params.dedicated();
    let n = params.shared();
    if m[class] == 0 {
        return Err(Error::Validation(format!(
            "class {} has no dedicated server to move",
            class + 1
        )));
    }
    let mut my = m.to_vec();
    my[class] -= 1;
    let ny = n + 1;

    let (mut x, mut y) = initial.unwrap_or_else(|| (Aggregated::empty(k), Aggregated::empty(k)));
    if !x.fits(m, n) || !y.fits(&my, ny) || !in_delta(&x, &y, class) {
        return Err(Error::Validation(
            "initial pair must lie in the coupled state space".into(),
        ));
    }

    let mut rng = stream(options.seed, options.stream);
    let mut path = options.record_path.then(|| CoupledPath {
        kind: CouplingKind::Training,
        x_columns: columns("x", k),
        y_columns: columns("y", k),
        events: vec![CoupledEvent {
            time: 0.0,
            x: x.components(),
            y: y.components(),
            violation: false,
        }],
    });
    let mut x_snaps = Snapshots::new(options.snapshot_spacing);
    let mut y_snaps = Snapshots::new(options.snapshot_spacing);
    let (mut area_x, mut area_y) = (0.0, 0.0);
    let mut min_gap = y.total() as i64 - x.total() as i64;
    let mut t = 0.0;
    let mut events: u64 = 0;

    loop {
        let table = transitions(params, class, (m, n), (&my, ny), &x, &y).map_err(|detail| {
            Error::CouplingViolation {
                event: events as usize,
                time: t,
                detail: format!("x = {x:?}, y = {y:?}: {detail}"),
            }
        })?;
        let rates: Vec<f64> = table.iter().map(|e| e.3).collect();
        let (end, winner) = match race(&mut rng, &rates) {
            Some((dt, i)) if t + dt <= options.horizon => (t + dt, Some(i)),
            _ => (options.horizon, None),
        };
        area_x += (end - t) * x.total() as f64;
        area_y += (end - t) * y.total() as f64;
        x_snaps.cover(end, || x.components());
        y_snaps.cover(end, || y.components());
        let Some(i) = winner else {
            break;
        };
        let (family, dx, dy, _) = table[i];
        t = end;
        events += 1;
        let violation = |detail: String| Error::CouplingViolation {
            event: events as usize,
            time: t,
            detail,
        };
        let nx = x
            .step(dx)
            .ok_or_else(|| violation(format!("{family} underflows x = {x:?}")))?;
        let ny_state = y
            .step(dy)
            .ok_or_else(|| violation(format!("{family} underflows y = {y:?}")))?;
        if !nx.fits(m, n) || !ny_state.fits(&my, ny) || !in_delta(&nx, &ny_state, class) {
            return Err(violation(format!(
                "{family} maps ({x:?}, {y:?}) to ({nx:?}, {ny_state:?})"
            )));
        }
        x = nx;
        y = ny_state;
        min_gap = min_gap.min(y.total() as i64 - x.total() as i64);
        if let Some(p) = path.as_mut() {
            p.events.push(CoupledEvent {
                time: t,
                x: x.components(),
                y: y.components(),
                violation: false,
            });
        }
    }

    let scale = if options.horizon > 0.0 { 1.0 / options.horizon } else { 0.0 };
    Ok(CouplingRun {
        kind: CouplingKind::Training,
        events,
        mean_x: area_x * scale,
        mean_y: area_y * scale,
        min_gap,
        x_snapshots: x_snaps.taken,
        y_snapshots: y_snaps.taken,
        path,
    })
}
