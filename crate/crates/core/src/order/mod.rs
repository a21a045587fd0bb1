//! Comparison machinery: upper sets of a preordered state list, the
//! pairwise rate conditions, Massey's generator criterion and stochastic
//! dominance between computed distributions.

mod dominance;
mod massey;
mod theorem1;
mod upper_sets;
mod verdict;

pub use dominance::{dominates_integer, dominates_preorder};
pub use massey::check_massey;
pub use theorem1::check_theorem1;
pub use upper_sets::{enumerate_upper_sets, StateMask, UpperSet};
pub use verdict::{ComparisonVerdict, Violation, Witness};
