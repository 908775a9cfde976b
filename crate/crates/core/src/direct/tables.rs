use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{input, refused, Result};

/// Per-level totals and scores of the reachability gadgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    pub width: usize,
    /// `z[k]`: total weight of every level-`k` gadget.
    pub z: Vec<BigUint>,
    /// `y[k]`: score of a level-`k` gadget pair whose endpoints are connected.
    pub y: Vec<BigUint>,
}

impl ScoreTable {
    pub fn levels(&self) -> usize {
        self.z.len() - 1
    }

    /// Largest score of a disconnected pair: `y[k] - 1`.
    pub fn x_bound(&self, k: usize) -> BigUint {
        &self.y[k] - 1u32
    }

    /// Weight of `z_k` letters.
    pub fn w_index(&self, k: usize) -> BigUint {
        &self.z[k - 1] * 2u32
    }

    /// Weight of `f_k`, `g_k` and `#_k`.
    pub fn w_pad(&self, k: usize) -> BigUint {
        &self.z[k - 1] * 9u32
    }

    /// Symbol count of every level-`k` gadget.
    pub fn symbol_count(&self, k: usize) -> BigUint {
        let w = BigUint::from(self.width);
        let head = &w * &w * 4u32 + &w * 5u32;
        (0..k).fold(BigUint::one(), |l, _| &head + &w * 2u32 * l)
    }
}

/// Exact tables for levels `0..=t`.
pub fn score_tables(width: usize, t: u32) -> Result<ScoreTable> {
    if width < 2 {
        return input(format!("width {width} must be at least 2"));
    }
    let w = BigUint::from(width);
    let growth = &w * (&w * 36u32 + 26u32);
    let mut z = vec![BigUint::one()];
    let mut y = vec![BigUint::one()];
    for k in 1..=t as usize {
        z.push(&z[k - 1] * &growth);
        y.push((&w * 6u32 + 1u32) * 6u32 * &z[k - 1] + &y[k - 1] * 2u32);
    }
    Ok(ScoreTable { width, z, y })
}

pub(crate) fn to_u64(v: &BigUint, what: &str) -> Result<u64> {
    v.to_u64()
        .map_or_else(|| refused(format!("{what} = {v} does not fit in 64 bits")), Ok)
}
