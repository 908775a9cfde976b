//! Quadratic dynamic programs. All of them keep a single row except `k_lcs`,
//! which fills the full K-dimensional table.

use super::alphabet::{Symbol, WeightedSequence};
use crate::error::{input, refused, Result};

/// Largest K-dimensional table `k_lcs` will allocate.
pub const MAX_KLCS_CELLS: u64 = 10_000_000;

/// Length of a longest common subsequence.
pub fn lcs<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    weighted_lcs_by(x, y, |_| 1) as usize
}

/// Weighted LCS over raw symbol slices, with `weight(s)` gained per matched symbol.
pub fn weighted_lcs_by<T: PartialEq>(x: &[T], y: &[T], weight: impl Fn(&T) -> u64) -> u64 {
    let (x, y) = if x.len() < y.len() { (y, x) } else { (x, y) };
    let mut row = vec![0u64; y.len() + 1];
    for a in x {
        let wa = weight(a);
        let mut diag = 0;
        for (j, b) in y.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if a == b { diag + wa } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[y.len()]
}

/// Weighted LCS over symbol slices sharing the weight table `weights`.
pub fn wlcs_symbols(x: &[Symbol], y: &[Symbol], weights: &[u64]) -> u64 {
    weighted_lcs_by(x, y, |&s| weights[s as usize])
}

/// Maximum total weight of a common subsequence.
pub fn wlcs(p1: &WeightedSequence, p2: &WeightedSequence) -> Result<u64> {
    if !p1.same_alphabet(p2) {
        return input("sequences are over different alphabets");
    }
    Ok(wlcs_symbols(p1.symbols(), p2.symbols(), p1.alphabet().weights()))
}

/// Longest common subsequence of all `seqs`, each matched symbol gaining its
/// weight (`None` means unit weights).
pub fn k_lcs(seqs: &[&[Symbol]], weights: Option<&[u64]>) -> Result<u64> {
    if seqs.len() < 2 {
        return input(format!("k-LCS needs at least two sequences, got {}", seqs.len()));
    }
    let dims: Vec<usize> = seqs.iter().map(|s| s.len() + 1).collect();
    let cells = dims
        .iter()
        .try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
        .filter(|&c| c <= MAX_KLCS_CELLS);
    let Some(cells) = cells else {
        return refused(format!("k-LCS table {dims:?} exceeds {MAX_KLCS_CELLS} cells"));
    };
    // Row-major strides; the last sequence varies fastest.
    let mut strides = vec![1usize; dims.len()];
    for d in (0..dims.len() - 1).rev() {
        strides[d] = strides[d + 1] * dims[d + 1];
    }
    let weight = |s: Symbol| weights.map_or(1, |w| w[s as usize]);
    let mut table = vec![0u64; cells as usize];
    let mut idx = vec![0usize; dims.len()];
    for cell in 0..cells as usize {
        if idx.iter().all(|&i| i > 0) {
            let first = seqs[0][idx[0] - 1];
            let all_match = seqs.iter().zip(&idx).all(|(s, &i)| s[i - 1] == first);
            table[cell] = if all_match {
                table[cell - strides.iter().sum::<usize>()] + weight(first)
            } else {
                strides.iter().map(|&st| table[cell - st]).max().unwrap_or(0)
            };
        }
        for d in (0..dims.len()).rev() {
            idx[d] += 1;
            if idx[d] < dims[d] {
                break;
            }
            idx[d] = 0;
        }
    }
    Ok(table[cells as usize - 1])
}

/// Levenshtein distance: insertions, deletions and substitutions at cost 1.
pub fn edit_distance<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    edit_distance_with(x, y, true)
}

/// Edit distance with only insertions and deletions.
pub fn indel_distance<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    edit_distance_with(x, y, false)
}

fn edit_distance_with<T: PartialEq>(x: &[T], y: &[T], substitution: bool) -> usize {
    let mut row: Vec<usize> = (0..=y.len()).collect();
    for (i, a) in x.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, b) in y.iter().enumerate() {
            let up = row[j + 1];
            let replace = if a == b {
                diag
            } else if substitution {
                diag + 1
            } else {
                usize::MAX
            };
            row[j + 1] = replace.min(up + 1).min(row[j] + 1);
            diag = up;
        }
    }
    row[y.len()]
}

#[cfg(test)]
mod tests {
    use std::collections::{HashSet, VecDeque};
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::measures::WeightedAlphabet;

    fn subsequences(x: &[u32]) -> HashSet<Vec<u32>> {
        (0u32..(1 << x.len()))
            .map(|mask| {
                (0..x.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| x[i])
                    .collect()
            })
            .collect()
    }

    fn is_subsequence(s: &[u32], of: &[u32]) -> bool {
        let mut it = of.iter();
        s.iter().all(|c| it.any(|d| d == c))
    }

    fn brute_wlcs(seqs: &[&[u32]], w: &[u64]) -> u64 {
        subsequences(seqs[0])
            .into_iter()
            .filter(|s| seqs[1..].iter().all(|o| is_subsequence(s, o)))
            .map(|s| s.iter().map(|&c| w[c as usize]).sum())
            .max()
            .unwrap()
    }

    /// Shortest edit script by breadth-first search over strings.
    fn brute_edit(x: &[u32], y: &[u32], alphabet: u32) -> usize {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(x.to_vec(), 0)]);
        let limit = x.len() + y.len() + 1;
        while let Some((s, d)) = queue.pop_front() {
            if s == y {
                return d;
            }
            if !seen.insert(s.clone()) || s.len() > limit {
                continue;
            }
            for i in 0..=s.len() {
                for c in 0..alphabet {
                    let mut t = s.clone();
                    t.insert(i, c);
                    queue.push_back((t, d + 1));
                }
                if i < s.len() {
                    let mut t = s.clone();
                    t.remove(i);
                    queue.push_back((t, d + 1));
                    for c in 0..alphabet {
                        let mut t = s.clone();
                        t[i] = c;
                        queue.push_back((t, d + 1));
                    }
                }
            }
        }
        unreachable!()
    }

    /// Exhaustive recursion over the three operations, no memoisation.
    fn naive_edit(x: &[u32], y: &[u32]) -> usize {
        match (x.split_last(), y.split_last()) {
            (None, _) => y.len(),
            (_, None) => x.len(),
            (Some((a, xs)), Some((b, ys))) => {
                let replace = naive_edit(xs, ys) + usize::from(a != b);
                replace.min(naive_edit(xs, y) + 1).min(naive_edit(x, ys) + 1)
            }
        }
    }

    #[test]
    fn trivial_cases() {
        let x = [1, 0, 1, 1];
        assert_eq!(lcs(&x, &x), 4);
        assert_eq!(lcs(&x, &[]), 0);
        assert_eq!(edit_distance(&x, &x), 0);
        assert_eq!(edit_distance(&x, &[]), 4);
        assert_eq!(edit_distance(&[0, 1], &[1, 1]), 1);
        assert_eq!(indel_distance(&[0, 1], &[1, 1]), 2);
    }

    #[test]
    fn wlcs_checks_alphabets() {
        let a = Arc::new(WeightedAlphabet::from_weights(vec![2, 3]).unwrap());
        let b = Arc::new(WeightedAlphabet::from_weights(vec![2, 4]).unwrap());
        let p = WeightedSequence::new(a.clone(), vec![0, 1, 0]).unwrap();
        let q = WeightedSequence::new(b, vec![0, 1]).unwrap();
        assert!(wlcs(&p, &q).is_err());
        assert_eq!(wlcs(&p, &p).unwrap(), p.total_length());
    }

    #[test]
    fn k_lcs_cases() {
        let x: &[u32] = &[0, 1, 2, 1];
        let y: &[u32] = &[1, 2, 0, 1];
        assert_eq!(k_lcs(&[x, y], None).unwrap(), lcs(x, y) as u64);
        assert_eq!(k_lcs(&[x, x, x], None).unwrap(), 4);
        assert!(k_lcs(&[x], None).is_err());
        let long = vec![0u32; 300];
        assert!(matches!(
            k_lcs(&[&long, &long, &long], None),
            Err(crate::Error::Refused(_))
        ));
    }

    fn binary(max: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0u32..2, 0..=max)
    }

    proptest! {
        #[test]
        fn lcs_matches_enumeration(x in binary(12), y in binary(12)) {
            prop_assert_eq!(lcs(&x, &y) as u64, brute_wlcs(&[&x, &y], &[1, 1]));
        }

        #[test]
        fn wlcs_matches_enumeration(
            x in prop::collection::vec(0u32..4, 0..=10),
            y in prop::collection::vec(0u32..4, 0..=10),
            w in prop::collection::vec(1u64..=5, 4),
        ) {
            let brute = brute_wlcs(&[&x, &y], &w);
            prop_assert_eq!(wlcs_symbols(&x, &y, &w), brute);
            prop_assert_eq!(wlcs_symbols(&y, &x, &w), brute);
            let total = |s: &[u32]| s.iter().map(|&c| w[c as usize]).sum::<u64>();
            prop_assert!(brute <= total(&x).min(total(&y)));
        }

        #[test]
        fn k_lcs_matches_enumeration(
            seqs in prop::collection::vec(prop::collection::vec(0u32..3, 0..=8), 3),
            w in prop::collection::vec(1u64..=4, 3),
        ) {
            let refs: Vec<&[u32]> = seqs.iter().map(|s| s.as_slice()).collect();
            prop_assert_eq!(k_lcs(&refs, Some(&w)).unwrap(), brute_wlcs(&refs, &w));
        }

        #[test]
        fn k_lcs_monotone_in_k(seqs in prop::collection::vec(binary(7), 4)) {
            let refs: Vec<&[u32]> = seqs.iter().map(|s| s.as_slice()).collect();
            let values: Vec<u64> = (2..=4).map(|k| k_lcs(&refs[..k], None).unwrap()).collect();
            prop_assert!(values.windows(2).all(|p| p[1] <= p[0]));
        }

        #[test]
        fn edit_distance_matches_search(x in binary(4), y in binary(4)) {
            prop_assert_eq!(edit_distance(&x, &y), brute_edit(&x, &y, 2));
        }

        #[test]
        fn edit_distance_matches_recursion(x in binary(7), y in binary(7)) {
            prop_assert_eq!(edit_distance(&x, &y), naive_edit(&x, &y));
        }

        #[test]
        fn indel_lcs_duality(x in binary(10), y in binary(10)) {
            prop_assert_eq!(indel_distance(&x, &y), x.len() + y.len() - 2 * lcs(&x, &y));
        }
    }
}
