//! Exact analysis, stochastic bounds and coupled simulation of multiclass
//! two-layer loss systems with overflow routing.
//!
//! Layer 1 holds `m[k]` servers dedicated to class `k`; layer 2 holds `n`
//! servers shared by all classes. Arrivals try layer 1 first, overflow to
//! layer 2, and are lost when both are full. The crate provides
//!
//! - [`model`]: states, routing rates, maximum packing and enumeration,
//! - [`exact`]: generator assembly, stationary solves and metrics,
//! - [`bounds`]: Erlang per-class bounds, the packed product form and
//!   overall bounds,
//! - [`order`]: exhaustive checks of the rate comparison conditions,
//!   Massey's upper-set criterion and stochastic dominance,
//! - [`sim`]: jump-chain simulation, the two explicit couplings and
//!   deterministic schedule replay,
//! - [`reproduce`]: the published tables and figure sweeps.

pub mod bounds;
pub mod config;
pub mod error;
pub mod exact;
pub mod model;
pub mod order;
pub mod params;
pub mod reproduce;
pub mod sim;

pub use config::Config;
pub use error::{Error, Result};
pub use params::SystemParams;
