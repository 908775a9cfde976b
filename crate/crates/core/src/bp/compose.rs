use super::{BranchingProgram, Edge};
use crate::error::{input, Result};

fn check_pair(p1: &BranchingProgram, p2: &BranchingProgram) -> Result<()> {
    if p1.num_vars() != p2.num_vars() {
        return input(format!(
            "programs read {} and {} variables",
            p1.num_vars(),
            p2.num_vars()
        ));
    }
    if p1.num_layers() < 2 || p2.num_layers() < 2 {
        return input("composition needs programs with at least two layers");
    }
    Ok(())
}

/// P1's edges, minus those entering its last layer anywhere but the accept node.
fn trimmed(p1: &BranchingProgram) -> impl Iterator<Item = Edge> + '_ {
    let last = p1.num_layers() - 1;
    p1.edges()
        .iter()
        .filter(move |e| e.layer < last || e.to == 1)
        .copied()
}

/// Runs `p1` then `p2`, gluing `p1`'s accept node onto `p2`'s start node.
/// Accepts exactly the inputs both programs accept.
pub fn serial_and(p1: &BranchingProgram, p2: &BranchingProgram) -> Result<BranchingProgram> {
    check_pair(p1, p2)?;
    let offset = p1.num_layers() - 1;
    let width = p1.width().max(p2.width());
    let mut vars = p1.layer_vars().to_vec();
    vars.extend_from_slice(p2.layer_vars());
    let edges = trimmed(p1).chain(p2.edges().iter().map(|e| Edge {
        layer: e.layer + offset,
        ..*e
    }));
    BranchingProgram::new(p1.num_vars(), offset + p2.num_layers(), width, vars, edges)
}

/// Accepts exactly the inputs at least one of the programs accepts.
///
/// `p2` runs after `p1` in time. Two extra lanes carry the start node past
/// `p1` into `p2`'s start, and `p1`'s accept node past `p2` into the final
/// accept node.
pub fn parallel_or(p1: &BranchingProgram, p2: &BranchingProgram) -> Result<BranchingProgram> {
    check_pair(p1, p2)?;
    let base = p1.width().max(p2.width());
    let (skip, done) = (base + 1, base + 2);
    let t1 = p1.num_layers();
    let offset = t1 - 1;
    let layers = offset + p2.num_layers();
    let mut vars = p1.layer_vars().to_vec();
    vars.extend_from_slice(p2.layer_vars());

    let both = |layer, from, to| [false, true].map(|bit| Edge { layer, from, to, bit });
    let mut edges: Vec<Edge> = trimmed(p1).collect();
    for layer in 1..t1 {
        let from = if layer == 1 { 1 } else { skip };
        edges.extend(both(layer, from, skip));
    }
    for layer in t1..layers {
        let from = if layer == t1 { 1 } else { done };
        let to = if layer + 1 == layers { 1 } else { done };
        edges.extend(both(layer, from, to));
    }
    // p2's node 1 lives on the skip lane until its final layer.
    let relabel = |local_layer: usize, j: usize| {
        if j == 1 && local_layer < p2.num_layers() {
            skip
        } else {
            j
        }
    };
    edges.extend(p2.edges().iter().map(|e| Edge {
        layer: e.layer + offset,
        from: relabel(e.layer, e.from),
        to: relabel(e.layer + 1, e.to),
        bit: e.bit,
    }));
    BranchingProgram::new(p1.num_vars(), layers, base + 2, vars, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::{all_assignments, random_bp, RandomBpParams};

    fn sample(seed: u64, t: u32, density: f64) -> BranchingProgram {
        random_bp(&RandomBpParams { n: 4, width: 2, t, density }, seed).unwrap()
    }

    #[test]
    fn and_or_truth_tables() {
        for seed in 0..40 {
            let p1 = sample(seed, 1 + (seed % 2) as u32, 0.45);
            let p2 = sample(seed + 1000, 1 + (seed % 3 == 0) as u32, 0.45);
            let and = serial_and(&p1, &p2).unwrap();
            let or = parallel_or(&p1, &p2).unwrap();
            for asg in all_assignments(4) {
                let (a, b) = (p1.evaluate(&asg).unwrap(), p2.evaluate(&asg).unwrap());
                assert_eq!(and.evaluate(&asg).unwrap(), a && b, "and, seed {seed}");
                assert_eq!(or.evaluate(&asg).unwrap(), a || b, "or, seed {seed}");
            }
        }
    }

    #[test]
    fn two_layer_operands() {
        let single = |bit| {
            BranchingProgram::new(1, 2, 1, vec![1], [Edge { layer: 1, from: 1, to: 1, bit }])
                .unwrap()
        };
        let or = parallel_or(&single(false), &single(true)).unwrap();
        let and = serial_and(&single(false), &single(true)).unwrap();
        for v in [false, true] {
            assert!(or.evaluate(&[v]).unwrap());
            assert!(!and.evaluate(&[v]).unwrap());
        }
    }

    #[test]
    fn mismatched_variable_counts() {
        let a = sample(1, 1, 0.5);
        let b = random_bp(&RandomBpParams { n: 2, width: 2, t: 1, density: 0.5 }, 1).unwrap();
        assert!(serial_and(&a, &b).is_err());
        assert!(parallel_or(&a, &b).is_err());
    }
}
