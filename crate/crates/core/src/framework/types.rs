use crate::error::{input, refused, Result};
use crate::measures::Symbol;

/// Largest list length for which every partial alignment is enumerated.
pub const MAX_ENUMERATION: usize = 6;

/// Which of the two sequences an instance is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    X,
    Y,
}

/// Shape of an instance: expanded length and symbol count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeTag {
    pub length: u64,
    pub symbols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub seq: Vec<Symbol>,
    pub tag: TypeTag,
}

impl GadgetInstance {
    pub fn new(seq: Vec<Symbol>, weights: &[u64]) -> Self {
        let tag = tag_of(&seq, weights);
        GadgetInstance { seq, tag }
    }
}

pub fn tag_of(seq: &[Symbol], weights: &[u64]) -> TypeTag {
    TypeTag {
        length: seq.iter().map(|&s| weights[s as usize]).sum(),
        symbols: seq.len(),
    }
}

/// Shared tag of `items`, or an error when they differ.
pub fn uniform_tag(items: &[GadgetInstance]) -> Result<TypeTag> {
    let Some(first) = items.first() else {
        return input("empty instance list");
    };
    if items.iter().any(|i| i.tag != first.tag) {
        return input("instances in one list must share a type");
    }
    Ok(first.tag)
}

/// Partial alignment between a list of `n` and a list of `m <= n`
/// instances; pairs are 1-based and strictly increasing in both entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlignmentSpec {
    n: usize,
    m: usize,
    pairs: Vec<(usize, usize)>,
}

impl AlignmentSpec {
    pub fn new(n: usize, m: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if m > n {
            return input(format!("alignment needs m <= n, got n = {n}, m = {m}"));
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if i == 0 || i > n || j == 0 || j > m {
                return input(format!("pair ({i}, {j}) out of range"));
            }
            if k > 0 && (i <= pairs[k - 1].0 || j <= pairs[k - 1].1) {
                return input("pairs must increase in both coordinates");
            }
        }
        Ok(AlignmentSpec { n, m, pairs })
    }

    /// The structured alignment `{(delta + 1, 1), ..., (delta + m, m)}`.
    pub fn structured(n: usize, m: usize, delta: usize) -> Result<Self> {
        if m > n || delta > n - m {
            return input(format!("no structured alignment with delta {delta} for n = {n}, m = {m}"));
        }
        Ok(AlignmentSpec { n, m, pairs: (1..=m).map(|j| (delta + j, j)).collect() })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_structured(&self) -> bool {
        self.pairs.len() == self.m
            && self.pairs.iter().all(|&(i, j)| i - j == self.pairs[0].0 - 1)
    }

    /// Sum of aligned distances plus `Q` per unaligned short-list index;
    /// `dist[i][j]` is indexed from 0.
    pub fn cost(&self, dist: &[Vec<u64>]) -> Result<u64> {
        check_matrix(dist, self.n, self.m)?;
        let q = max_entry(dist);
        let aligned: u64 = self.pairs.iter().map(|&(i, j)| dist[i - 1][j - 1]).sum();
        Ok(aligned + (self.m - self.pairs.len()) as u64 * q)
    }
}

fn check_matrix(dist: &[Vec<u64>], n: usize, m: usize) -> Result<()> {
    if dist.len() != n || dist.iter().any(|r| r.len() != m) {
        return input(format!("distance matrix must be {n} x {m}"));
    }
    Ok(())
}

fn max_entry(dist: &[Vec<u64>]) -> u64 {
    dist.iter().flatten().copied().max().unwrap_or(0)
}

/// Every partial alignment, ordered by size then lexicographically.
pub fn enumerate_alignments(n: usize, m: usize) -> Result<Vec<AlignmentSpec>> {
    if m > n {
        return input(format!("alignment needs m <= n, got n = {n}, m = {m}"));
    }
    if n > MAX_ENUMERATION {
        return refused(format!("enumerating alignments for n = {n} exceeds {MAX_ENUMERATION}"));
    }
    fn subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << len)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| (1..=len).filter(|i| mask >> (i - 1) & 1 == 1).collect())
            .collect()
    }
    let mut out = Vec::new();
    for k in 0..=m {
        for is in subsets(n, k) {
            for js in subsets(m, k) {
                let pairs = is.iter().copied().zip(js.iter().copied()).collect();
                out.push(AlignmentSpec { n, m, pairs });
            }
        }
    }
    out.sort_by(|a, b| (a.pairs.len(), &a.pairs).cmp(&(b.pairs.len(), &b.pairs)));
    Ok(out)
}

/// The `n - m + 1` structured alignments.
pub fn structured_alignments(n: usize, m: usize) -> Result<Vec<AlignmentSpec>> {
    if m > n {
        return input(format!("alignment needs m <= n, got n = {n}, m = {m}"));
    }
    (0..=n - m).map(|d| AlignmentSpec::structured(n, m, d)).collect()
}

/// Minimum cost over all partial alignments, by dynamic programming.
pub fn min_alignment_cost(dist: &[Vec<u64>]) -> Result<u64> {
    let n = dist.len();
    let m = dist.first().map_or(0, Vec::len);
    check_matrix(dist, n, m)?;
    if m > n {
        return input(format!("alignment needs m <= n, got n = {n}, m = {m}"));
    }
    let q = max_entry(dist);
    // Maximise the total saving Q - dist over increasing matchings.
    let mut best = vec![vec![0u64; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            best[i][j] = best[i - 1][j]
                .max(best[i][j - 1])
                .max(best[i - 1][j - 1] + (q - dist[i - 1][j - 1]));
        }
    }
    Ok(m as u64 * q - best[n][m])
}

/// Minimum cost over structured alignments.
pub fn min_structured_cost(dist: &[Vec<u64>]) -> Result<u64> {
    let n = dist.len();
    let m = dist.first().map_or(0, Vec::len);
    structured_alignments(n, m)?
        .iter()
        .map(|a| a.cost(dist))
        .try_fold(u64::MAX, |acc, c| c.map(|c| acc.min(c)))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn enumeration_counts() {
        let one = enumerate_alignments(1, 1).unwrap();
        assert_eq!(one.len(), 2);
        assert!(one[0].pairs().is_empty());
        assert_eq!(enumerate_alignments(3, 2).unwrap().len(), 1 + 3 * 2 + 3);
        let binom = |n: u64, k: u64| (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1));
        for n in 1..=6 {
            for m in 0..=n {
                let expected: u64 = (0..=m as u64).map(|k| binom(n as u64, k) * binom(m as u64, k)).sum();
                let all = enumerate_alignments(n, m).unwrap();
                assert_eq!(all.len() as u64, expected);
                let unique: std::collections::HashSet<_> = all.iter().collect();
                assert_eq!(unique.len(), all.len());
                assert_eq!(structured_alignments(n, m).unwrap().len(), n - m + 1);
            }
        }
        assert!(matches!(enumerate_alignments(7, 1), Err(crate::Error::Refused(_))));
        assert!(enumerate_alignments(2, 3).is_err());
    }

    #[test]
    fn cost_cases() {
        let dist = vec![vec![1, 3], vec![3, 1]];
        let empty = AlignmentSpec::new(2, 2, vec![]).unwrap();
        assert_eq!(empty.cost(&dist).unwrap(), 2 * 3);
        let identity = AlignmentSpec::structured(2, 2, 0).unwrap();
        assert!(identity.is_structured());
        assert_eq!(identity.cost(&dist).unwrap(), 2);
        assert!(!AlignmentSpec::new(2, 2, vec![(1, 2)]).unwrap().is_structured());
        assert!(AlignmentSpec::new(2, 2, vec![(2, 1), (1, 2)]).is_err());
        assert!(AlignmentSpec::new(1, 2, vec![]).is_err());
        assert_eq!(AlignmentSpec::new(0, 0, vec![]).unwrap().cost(&[]).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn dp_matches_enumeration(
            (n, m, flat) in (1usize..=5).prop_flat_map(|n| (Just(n), 1..=n))
                .prop_flat_map(|(n, m)| (Just(n), Just(m), prop::collection::vec(0u64..20, n * m)))
        ) {
            let dist: Vec<Vec<u64>> = flat.chunks(m).map(|r| r.to_vec()).collect();
            let brute = enumerate_alignments(n, m).unwrap().iter()
                .map(|a| a.cost(&dist).unwrap()).min().unwrap();
            prop_assert_eq!(min_alignment_cost(&dist).unwrap(), brute);
            prop_assert!(brute <= min_structured_cost(&dist).unwrap());
        }
    }
}
