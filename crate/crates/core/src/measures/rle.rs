//! Exact LCS of run-length encoded strings.
//!
//! The DP grid is cut into blocks, one per pair of runs. Along every block
//! edge the DP is nondecreasing with unit or zero steps, so it is stored as
//! a start value plus maximal constant-slope segments. Blocks of distinct
//! letters propagate `F(i, j) = max(F(i0, j), F(i, j0))`; blocks of equal
//! letters propagate along diagonals. Cost depends on segment counts, not
//! on run lengths.

use super::alphabet::Symbol;

/// `(symbol, run length)`; adjacent runs may share a symbol.
pub type Run = (Symbol, u64);

#[derive(Debug, Clone)]
struct Profile {
    start: u64,
    end: u64,
    /// `(length, rising)`; adjacent segments never share a slope.
    segs: Vec<(u64, bool)>,
}

fn push(segs: &mut Vec<(u64, bool)>, len: u64, rising: bool) {
    if len == 0 {
        return;
    }
    match segs.last_mut() {
        Some((l, r)) if *r == rising => *l += len,
        _ => segs.push((len, rising)),
    }
}

impl Profile {
    fn flat(value: u64, len: u64) -> Self {
        let mut segs = Vec::new();
        push(&mut segs, len, false);
        Profile { start: value, end: value, segs }
    }

    /// Pointwise `max(self, floor)`.
    fn clamp_below(&mut self, floor: u64) {
        if floor <= self.start {
            return;
        }
        if floor >= self.end {
            let len = self.segs.iter().map(|s| s.0).sum();
            *self = Profile::flat(floor, len);
            return;
        }
        let mut value = self.start;
        let mut pos = 0;
        for (i, &(len, rising)) in self.segs.iter().enumerate() {
            if rising && value + len >= floor {
                let climb = floor - value;
                let mut segs = Vec::with_capacity(self.segs.len() - i + 1);
                push(&mut segs, pos + climb, false);
                push(&mut segs, len - climb, true);
                for &(l, r) in &self.segs[i + 1..] {
                    push(&mut segs, l, r);
                }
                self.segs = segs;
                self.start = floor;
                return;
            }
            if rising {
                value += len;
            }
            pos += len;
        }
        unreachable!("floor below end must be reached");
    }

    /// Segments covering positions `[from, to)`.
    fn window(&self, from: u64, to: u64, out: &mut Vec<(u64, bool)>) {
        let mut pos = 0;
        for &(len, rising) in &self.segs {
            let (lo, hi) = (pos.max(from), (pos + len).min(to));
            if lo < hi {
                push(out, hi - lo, rising);
            }
            pos += len;
            if pos >= to {
                break;
            }
        }
    }

    /// Segments of `[from, to)` read backwards with slopes flipped.
    fn reversed_flipped(&self, from: u64, to: u64, out: &mut Vec<(u64, bool)>) {
        let mut tmp = Vec::new();
        self.window(from, to, &mut tmp);
        for &(len, rising) in tmp.iter().rev() {
            push(out, len, !rising);
        }
    }
}

fn build(start: u64, segs: Vec<(u64, bool)>) -> Profile {
    let end = start + segs.iter().filter(|s| s.1).map(|s| s.0).sum::<u64>();
    Profile { start, end, segs }
}

/// Block of equal letters with `rows` x `cols` cells.
fn diagonal_block(top: &Profile, left: &Profile, rows: u64, cols: u64) -> (Profile, Profile) {
    let m = rows.min(cols);
    let mut bottom = Vec::new();
    left.reversed_flipped(rows - m, rows, &mut bottom);
    if cols > rows {
        top.window(0, cols - rows, &mut bottom);
    }
    let mut right = Vec::new();
    top.reversed_flipped(cols - m, cols, &mut right);
    if rows > cols {
        left.window(0, rows - cols, &mut right);
    }
    (build(left.end, bottom), build(top.end, right))
}

/// `lcs` of the strings the two run lists expand to.
pub fn lcs_runs(a: &[Run], b: &[Run]) -> u64 {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return 0;
    }
    let mut tops: Vec<Profile> = b.iter().map(|&(_, len)| Profile::flat(0, len)).collect();
    for &(sa, rows) in a {
        let mut left = Profile::flat(0, rows);
        for (top, &(sb, cols)) in tops.iter_mut().zip(b) {
            if sa == sb {
                let (bottom, right) = diagonal_block(top, &left, rows, cols);
                *top = bottom;
                left = right;
            } else {
                let (top_end, left_end) = (top.end, left.end);
                top.clamp_below(left_end);
                left.clamp_below(top_end);
            }
        }
    }
    tops[tops.len() - 1].end
}

/// Run list of a plain sequence.
pub fn runs_of(seq: &[Symbol]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for &s in seq {
        match out.last_mut() {
            Some((last, len)) if *last == s => *len += 1,
            _ => out.push((s, 1)),
        }
    }
    out
}
