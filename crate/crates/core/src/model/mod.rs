//! States, routing rates and state-space enumeration for the overflow and
//! maximum-packing systems.

mod preorder;
mod rates;
mod space;
mod state;

pub use preorder::{precedes, Preorder};
pub use rates::{
    downward_rate, in_smp, rate_of, region_of, repack, totals_fit, transition_rates,
    upward_rate, Policy, Region,
};
pub use space::{enumerate_states, state_count, StateSpace};
pub use state::{Layer, Move, State};

pub(crate) use space::{binomial, bounded_sum_vectors};
