//! Closed-form and product-form bounds: Erlang laws, the maximum-packing
//! stationary law, per-class Erlang bounds and overall bounds over the
//! configurations without shared servers.

mod erlang;
mod overall;
mod per_class;
mod product_form;
mod report;

pub use erlang::{erlang_b, erlang_distribution, erlang_mean, ErlangSpec};
pub use overall::{enumerate_cmn, overall_bounds, OverallBounds, PackedReference};
pub use per_class::{per_class_bounds, Interval, PerClassBounds};
pub use product_form::{mp_stationary, packed_totals};
pub use report::{bounds_report, check_sandwich, BoundsReport, SandwichViolation, SCALAR_SLACK};
