use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::bp::{all_assignments, BranchingProgram};
use crate::error::{input, Result};
use crate::measures::{Symbol, WeightedAlphabet, WeightedSequence};

use super::gadgets::{GadgetBuilder, Side};
use super::tables::{to_u64, ScoreTable};

/// Output of the direct reduction.
///
/// `a` lists every a-side entry twice, `b` lists the b-side entries once,
/// and entries are separated by a heavy letter. Each a-entry carries a
/// dummy letter worth `Y - 1` that competes with its vector gadget, so an
/// entry pair scores `Y - 1` unless the pair satisfies the program.
#[derive(Debug, Clone)]
pub struct DirectReduction {
    pub a: WeightedSequence,
    pub b: WeightedSequence,
    /// `E`: reached iff some pair satisfies the program.
    pub threshold: u64,
    pub tables: ScoreTable,
    pub a_entries: usize,
    pub b_entries: usize,
    /// Total weight `Z_t` of one vector gadget.
    pub gadget_weight: u64,
    pub separator_weight: u64,
    pub marker_weight: u64,
    pub dummy_weight: u64,
}

impl DirectReduction {
    pub fn alphabet(&self) -> &Arc<WeightedAlphabet> {
        self.a.alphabet()
    }

    fn entry_weight(&self) -> u64 {
        self.marker_weight + self.dummy_weight + self.gadget_weight
    }

    fn outer_pad(&self) -> u64 {
        (2 * self.a_entries - self.b_entries + 1) as u64
    }

    /// Closed form for the total length of `a`.
    pub fn predicted_a_length(&self) -> u64 {
        let n = 2 * self.a_entries as u64;
        (n + 1) * self.separator_weight + n * self.entry_weight()
    }

    /// Closed form for the total length of `b`.
    pub fn predicted_b_length(&self) -> u64 {
        let m = self.b_entries as u64;
        (2 * self.outer_pad() + m - 1) * self.separator_weight + m * self.entry_weight()
    }

    /// Whether an LCS value certifies a satisfying pair.
    pub fn accepts(&self, lcs: u64) -> bool {
        lcs >= self.threshold
    }
}

/// Reduction over all `2^{n/2}` halves on each side.
pub fn reduce_direct(bp: &BranchingProgram) -> Result<DirectReduction> {
    let halves = all_assignments(bp.half()?);
    reduce_direct_sets(bp, &halves, &halves)
}

/// Reduction restricted to the half-assignment lists `s1` (a-side) and
/// `s2` (b-side), with `1 <= |s2| <= |s1|`.
pub fn reduce_direct_sets(bp: &BranchingProgram, s1: &[Vec<bool>], s2: &[Vec<bool>]) -> Result<DirectReduction> {
    bp.half()?;
    if s2.is_empty() || s2.len() > s1.len() {
        return input(format!(
            "need 1 <= |S2| <= |S1|, got |S1| = {}, |S2| = {}",
            s1.len(),
            s2.len()
        ));
    }
    let mut gb = GadgetBuilder::new(bp)?;
    let t = gb.depth();
    let tables = gb.tables().clone();
    let z = to_u64(&tables.z[t], "Z_t")?;
    let y = to_u64(&tables.y[t], "Y_t")?;
    let sep_w = to_u64(&(BigUint::from(z) * 2u32 + 1u32), "separator weight")?;
    let mark_w = z + 1;
    let dummy_w = y - 1;

    let a_gadgets: Vec<Vec<Symbol>> = s1
        .par_iter()
        .map(|h| gb.vector_gadget(Side::A, h))
        .collect::<Result<_>>()?;
    let b_gadgets: Vec<Vec<Symbol>> = s2
        .par_iter()
        .map(|h| gb.vector_gadget(Side::B, h))
        .collect::<Result<_>>()?;

    let alphabet = gb.alphabet_mut();
    let sep = alphabet.intern("sep", sep_w)?;
    let mark = alphabet.intern("mark", mark_w)?;
    let dummy = if dummy_w > 0 { Some(alphabet.intern("dummy", dummy_w)?) } else { None };

    let mut a = vec![sep];
    for g in a_gadgets.iter().chain(&a_gadgets) {
        a.push(mark);
        a.extend(dummy);
        a.extend_from_slice(g);
        a.push(sep);
    }
    let pad = 2 * s1.len() - s2.len() + 1;
    let mut b = vec![sep; pad];
    for (j, g) in b_gadgets.iter().enumerate() {
        if j > 0 {
            b.push(sep);
        }
        b.push(mark);
        b.extend_from_slice(g);
        b.extend(dummy);
    }
    b.extend(std::iter::repeat_n(sep, pad));

    let m = BigUint::from(s2.len());
    let threshold = BigUint::from(2 * s1.len() + 1) * sep_w
        + &m * mark_w
        + (&m - 1u32) * dummy_w
        + y;
    let threshold = to_u64(&threshold, "threshold")?;
    let alphabet = gb.alphabet().snapshot();
    Ok(DirectReduction {
        a: WeightedSequence::new(alphabet.clone(), a)?,
        b: WeightedSequence::new(alphabet, b)?,
        threshold,
        tables,
        a_entries: s1.len(),
        b_entries: s2.len(),
        gadget_weight: z,
        separator_weight: sep_w,
        marker_weight: mark_w,
        dummy_weight: dummy_w,
    })
}

/// Largest number of satisfying pairs one window of the doubled a-list can
/// line up with the b-list. The reduction's LCS equals `E - 1` plus this.
pub fn aligned_satisfying_pairs(bp: &BranchingProgram, s1: &[Vec<bool>], s2: &[Vec<bool>]) -> Result<usize> {
    let mut sat = vec![vec![false; s2.len()]; s1.len()];
    for (i, a) in s1.iter().enumerate() {
        for (j, b) in s2.iter().enumerate() {
            let joined: Vec<bool> = a.iter().chain(b).copied().collect();
            sat[i][j] = bp.evaluate(&joined)?;
        }
    }
    let shifts = 2 * s1.len() - s2.len();
    Ok((0..=shifts)
        .map(|d| (0..s2.len()).filter(|&j| sat[(d + j) % s1.len()][j]).count())
        .max()
        .unwrap_or(0))
}
