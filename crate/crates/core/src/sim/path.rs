use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::model::State;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEvent {
    pub time: f64,
    pub state: State,
}

/// A piecewise constant sample path: the initial state at time 0, then the
/// state entered at each event. Simulated paths have strictly increasing
/// times; replayed paths may repeat a time when events coincide.
#[derive(Debug, Clone, PartialEq)]
pub struct EventPath {
    events: Vec<PathEvent>,
}

impl EventPath {
    pub fn new(initial: State) -> Self {
        Self {
            events: vec![PathEvent {
                time: 0.0,
                state: initial,
            }],
        }
    }

    pub(crate) fn push(&mut self, time: f64, state: State) {
        debug_assert!(time >= self.events.last().unwrap().time);
        self.events.push(PathEvent { time, state });
    }

    pub fn events(&self) -> &[PathEvent] {
        &self.events
    }

    /// Number of recorded rows, the initial state included.
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn initial(&self) -> &State {
        &self.events[0].state
    }

    pub fn final_state(&self) -> &State {
        &self.events.last().unwrap().state
    }

    /// The right-continuous value at time `t`.
    pub fn state_at(&self, t: f64) -> &State {
        let i = self.events.partition_point(|e| e.time <= t);
        &self.events[i.saturating_sub(1)].state
    }

    /// CSV with header `time,x1_1..x1_K,x2_1..x2_K`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let k = self.initial().classes();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["time".to_string()];
        header.extend((1..=k).map(|c| format!("x1_{c}")));
        header.extend((1..=k).map(|c| format!("x2_{c}")));
        w.write_record(&header)?;
        for e in &self.events {
            let mut row = vec![e.time.to_string()];
            row.extend(e.state.x1.iter().chain(&e.state.x2).map(u32::to_string));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// One dedicated server of a class moved to the shared layer.
    Training,
    /// One class against the Erlang system with `m_k + n` servers.
    PerClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoupledEvent {
    pub time: f64,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub violation: bool,
}

/// Joint path of a coupling. Column names describe the components of `x`
/// and `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPath {
    pub kind: CouplingKind,
    pub x_columns: Vec<String>,
    pub y_columns: Vec<String>,
    pub events: Vec<CoupledEvent>,
}

impl CoupledPath {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["time".to_string()];
        header.extend(self.x_columns.iter().cloned());
        header.extend(self.y_columns.iter().cloned());
        header.push("violation".into());
        w.write_record(&header)?;
        for e in &self.events {
            let mut row = vec![e.time.to_string()];
            row.extend(e.x.iter().chain(&e.y).map(u32::to_string));
            row.push(u8::from(e.violation).to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
