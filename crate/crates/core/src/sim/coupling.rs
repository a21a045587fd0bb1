use super::{CoupledPath, CouplingKind};

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingOptions {
    pub horizon: f64,
    pub seed: u64,
    /// Replication index; selects the random stream under `seed`.
    pub stream: u64,
    /// Keep every joint event. Long statistical runs leave this off.
    pub record_path: bool,
    /// Sample both marginals at `spacing, 2 spacing, ...`.
    pub snapshot_spacing: Option<f64>,
}

impl CouplingOptions {
    pub fn new(horizon: f64, seed: u64) -> Self {
        Self {
            horizon,
            seed,
            stream: 0,
            record_path: false,
            snapshot_spacing: None,
        }
    }
}

/// Outcome of a coupled run that finished without an invariant violation.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingRun {
    pub kind: CouplingKind,
    pub events: u64,
    /// Time average of the compared `x` quantity: `|x|` for the training
    /// coupling, the class total for the per-class one.
    pub mean_x: f64,
    /// Time average of `|y|`, respectively `y`.
    pub mean_y: f64,
    /// Smallest value of the compared `y` quantity minus the `x` quantity
    /// over all event times.
    pub min_gap: i64,
    pub x_snapshots: Vec<Vec<u32>>,
    pub y_snapshots: Vec<Vec<u32>>,
    pub path: Option<CoupledPath>,
}
