//! Simulation: exact jump-chain runs of either policy, the two couplings
//! used to compare systems pathwise, deterministic schedule replay and the
//! statistics used to check simulated marginals against exact laws.

mod coupling;
mod path;
mod per_class;
mod race;
mod replay;
mod rng;
mod simulate;
mod stats;
mod training;

pub use coupling::{CouplingOptions, CouplingRun};
pub use path::{CoupledEvent, CoupledPath, CouplingKind, EventPath, PathEvent};
pub use per_class::simulate_perclass_coupling;
pub use replay::{
    replay, run_named, NamedReplay, NamedSchedule, ReplayRule, ReplaySchedule, ScheduledArrival,
};
pub use rng::stream;
pub use simulate::{
    replicate, replicate_mean_total, simulate, simulate_from, summarize_run, ReplicationSummary,
    RunSummary,
};
pub use stats::{chi_square_fit, law_of, GoodnessOfFit, MIN_EXPECTED};
pub use training::{in_delta, simulate_training_coupling, Aggregated};
