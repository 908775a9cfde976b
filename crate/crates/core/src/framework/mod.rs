//! Alignment gadgets over an abstract distance measure and the reduction
//! from branching-program satisfiability built on top of them.
//!
//! A [`Binding`] supplies the measure, four coordinate values and an
//! alignment gadget. [`LcsBinding`] is the shipped instance, using
//! `|x| + |y| - 2 lcs(x, y)` over an unbounded alphabet.

mod binding;
mod conformance;
mod or_gadget;
mod reach;
mod types;

pub use binding::{Binding, LcsBinding};
pub use conformance::{check_alignment_gadget, ConformanceReport};
pub use or_gadget::{or_gadget, or_offset, or_tags, or_x, or_y, OrGadget};
pub use reach::{FinalSequences, FrameworkReduction, Level, LevelConstants};
pub use types::{
    enumerate_alignments, min_alignment_cost, min_structured_cost, structured_alignments, tag_of,
    uniform_tag, AlignmentSpec, GadgetInstance, Role, TypeTag, MAX_ENUMERATION,
};
