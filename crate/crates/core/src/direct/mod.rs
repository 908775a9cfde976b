//! Direct reduction from branching-program satisfiability to weighted LCS.
//!
//! A level-`k` reachability gadget for nodes `2^k` layers apart is built
//! from `2W` level-`k-1` gadgets, one pair per midpoint node, wrapped in
//! padding letters whose weights force the matching to pick a single
//! midpoint. Every level-`k` gadget has the same total weight `Z_k`, and a
//! pair scores exactly `Y_k` when the endpoints are connected under the
//! joint assignment, less otherwise.

mod combine;
mod gadgets;
mod tables;

pub use combine::{aligned_satisfying_pairs, reduce_direct, reduce_direct_sets, DirectReduction};
pub use gadgets::{GadgetBuilder, Side};
pub use tables::{score_tables, ScoreTable};
