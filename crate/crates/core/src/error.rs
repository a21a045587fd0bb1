use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Validation(String),

    #[error("{what} too large: {count} exceeds the cap of {cap}")]
    Capacity {
        what: &'static str,
        count: u128,
        cap: u128,
    },

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("stationary solve did not converge: residual {residual:e} after {iterations} iterations")]
    Convergence { residual: f64, iterations: usize },

    #[error("generator has {0} closed communicating classes, expected exactly one")]
    Reducible(usize),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("coupling invariant violated at event {event} (t = {time}): {detail}")]
    CouplingViolation {
        event: usize,
        time: f64,
        detail: String,
    },

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, count: u128, cap: usize) -> Self {
        Error::Capacity {
            what,
            count,
            cap: cap as u128,
        }
    }
}
