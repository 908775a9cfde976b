use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BranchingProgram, Edge};
use crate::error::{input, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomBpParams {
    pub n: usize,
    pub width: usize,
    /// The program gets `2^t + 1` layers.
    pub t: u32,
    /// Inclusion probability of each potential labelled edge.
    pub density: f64,
}

/// Seeded random program: layer variables uniform over `1..=n`, each of the
/// `2 W^2` labelled edges between consecutive layers kept independently.
pub fn random_bp(params: &RandomBpParams, seed: u64) -> Result<BranchingProgram> {
    let RandomBpParams { n, width, t, density } = *params;
    if n == 0 || n % 2 != 0 {
        return input(format!("n = {n} must be positive and even"));
    }
    if width < 2 {
        return input(format!("width {width} must be at least 2"));
    }
    if t > 20 {
        return input(format!("t = {t} is unreasonably deep"));
    }
    if !(0.0..=1.0).contains(&density) {
        return input(format!("density {density} is not a probability"));
    }
    let layers = (1usize << t) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<usize> = (1..layers).map(|_| rng.gen_range(1..=n)).collect();
    let mut edges = Vec::new();
    for layer in 1..layers {
        for from in 1..=width {
            for to in 1..=width {
                for bit in [false, true] {
                    if rng.gen_bool(density) {
                        edges.push(Edge { layer, from, to, bit });
                    }
                }
            }
        }
    }
    BranchingProgram::new(n, layers, width, vars, edges)
}

/// One instance of [`corpus`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusEntry {
    pub params: RandomBpParams,
    pub seed: u64,
}

/// `count` instances cycling through `n` in {2, 4, 6}, `W` in {2, 3},
/// `t` in {1, 2} and four edge densities, seeded from `base_seed`.
pub fn corpus(count: usize, base_seed: u64) -> Vec<CorpusEntry> {
    const DENSITIES: [f64; 4] = [0.3, 0.45, 0.6, 0.75];
    (0..count)
        .map(|i| CorpusEntry {
            params: RandomBpParams {
                n: [2, 4, 6][i % 3],
                width: [2, 3][i / 3 % 2],
                t: [1, 2][i / 6 % 2],
                density: DENSITIES[i / 12 % 4],
            },
            seed: base_seed.wrapping_add(i as u64),
        })
        .collect()
}

impl CorpusEntry {
    pub fn build(&self) -> Result<BranchingProgram> {
        random_bp(&self.params, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::all_assignments;

    fn params(density: f64) -> RandomBpParams {
        RandomBpParams { n: 4, width: 3, t: 2, density }
    }

    #[test]
    fn deterministic_in_seed() {
        assert_eq!(random_bp(&params(0.4), 7).unwrap(), random_bp(&params(0.4), 7).unwrap());
        assert_ne!(random_bp(&params(0.4), 7).unwrap(), random_bp(&params(0.4), 8).unwrap());
    }

    #[test]
    fn extreme_densities() {
        let full = random_bp(&params(1.0), 3).unwrap();
        let empty = random_bp(&params(0.0), 3).unwrap();
        assert_eq!(full.num_layers(), 5);
        for asg in all_assignments(4) {
            assert!(full.evaluate(&asg).unwrap());
            assert!(!empty.evaluate(&asg).unwrap());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        for bad in [
            RandomBpParams { n: 3, ..params(0.5) },
            RandomBpParams { width: 1, ..params(0.5) },
            params(1.5),
        ] {
            assert!(random_bp(&bad, 0).is_err());
        }
    }
}
