//! Sequence similarity measures: LCS, weighted LCS, k-LCS and edit distance,
//! plus the weighted sequence types the reductions emit.

mod alphabet;
mod lcs;
mod rle;
mod seqfile;

pub use alphabet::{
    total_length, unweight, AlphabetBuilder, Symbol, WeightedAlphabet, WeightedSequence,
    DEFAULT_MAX_EXPAND,
};
pub use lcs::{
    edit_distance, indel_distance, k_lcs, lcs, weighted_lcs_by, wlcs, wlcs_symbols, MAX_KLCS_CELLS,
};
pub use rle::{lcs_runs, runs_of, Run};
pub use seqfile::{parse_sequence, write_sequence, write_unweighted};

/// `lcs(unweight(p1), unweight(p2))` computed on runs, without expanding.
pub fn unweighted_lcs(p1: &WeightedSequence, p2: &WeightedSequence) -> u64 {
    lcs_runs(&p1.runs(), &p2.runs())
}
