//! Nondeterministic layered branching programs.
//!
//! A program has `T` layers of at most `W` nodes. Every layer except the
//! last reads one input variable, and every edge between consecutive layers
//! carries a bit. An input selects the edges whose bit equals the value of
//! the layer variable; the program accepts iff node `(T, 1)` is reachable
//! from node `(1, 1)` in that subgraph.
//!
//! Layers, node indices and variables are all 1-based.

mod compose;
mod random;
mod text;

use std::collections::BTreeSet;

use crate::error::{input, refused, Result};

pub use compose::{parallel_or, serial_and};
pub use random::{corpus, random_bp, CorpusEntry, RandomBpParams};
pub use text::{parse_bp, serialize_bp};

/// Largest variable count `brute_force_sat` is willing to enumerate.
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

/// A node `(layer, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub layer: usize,
    pub index: usize,
}

impl Node {
    pub const fn new(layer: usize, index: usize) -> Self {
        Node { layer, index }
    }
}

/// Edge from `(layer, from)` to `(layer + 1, to)`, taken when the layer
/// variable equals `bit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub layer: usize,
    pub from: usize,
    pub to: usize,
    pub bit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchingProgram {
    n: usize,
    layers: usize,
    width: usize,
    layer_var: Vec<usize>,
    edges: BTreeSet<Edge>,
}

impl BranchingProgram {
    /// `layer_var[i - 1]` is the variable read by layer `i`, for `i < T`.
    pub fn new(
        n: usize,
        layers: usize,
        width: usize,
        layer_var: Vec<usize>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        if layers == 0 {
            return input("a program needs at least one layer");
        }
        if width == 0 {
            return input("width must be positive");
        }
        if layer_var.len() != layers - 1 {
            return input(format!(
                "expected {} layer variables, got {}",
                layers - 1,
                layer_var.len()
            ));
        }
        for (i, &v) in layer_var.iter().enumerate() {
            if v == 0 || v > n {
                return input(format!("layer {} reads variable {v} outside 1..={n}", i + 1));
            }
        }
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        for e in &edges {
            if e.layer == 0 || e.layer >= layers {
                return input(format!("edge leaves layer {} but the program has {layers}", e.layer));
            }
            if e.from == 0 || e.from > width || e.to == 0 || e.to > width {
                return input(format!(
                    "edge {}:{}->{} uses a node outside width {width}",
                    e.layer, e.from, e.to
                ));
            }
        }
        Ok(BranchingProgram {
            n,
            layers,
            width,
            layer_var,
            edges,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_layers(&self) -> usize {
        self.layers
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Variable read by `layer` (1-based); `None` for the final layer.
    pub fn layer_var(&self, layer: usize) -> Option<usize> {
        if layer == 0 {
            return None;
        }
        self.layer_var.get(layer - 1).copied()
    }

    pub fn layer_vars(&self) -> &[usize] {
        &self.layer_var
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn start(&self) -> Node {
        Node::new(1, 1)
    }

    pub fn accept(&self) -> Node {
        Node::new(self.layers, 1)
    }

    pub fn has_edge(&self, layer: usize, from: usize, to: usize, bit: bool) -> bool {
        self.edges.contains(&Edge {
            layer,
            from,
            to,
            bit,
        })
    }

    /// `Some(t)` when the program has exactly `2^t + 1` layers.
    pub fn depth_exponent(&self) -> Option<u32> {
        let span = self.layers.checked_sub(1)?;
        if span.is_power_of_two() {
            Some(span.trailing_zeros())
        } else {
            None
        }
    }

    fn check_assignment(&self, asg: &[bool]) -> Result<()> {
        if asg.len() != self.n {
            return input(format!(
                "assignment has {} bits, program reads {} variables",
                asg.len(),
                self.n
            ));
        }
        Ok(())
    }

    fn check_node(&self, u: Node) -> Result<()> {
        if u.layer == 0 || u.layer > self.layers || u.index == 0 || u.index > self.width {
            return input(format!("node ({}, {}) is outside the program", u.layer, u.index));
        }
        Ok(())
    }

    /// Edges consistent with `asg`.
    pub fn induced_subgraph(&self, asg: &[bool]) -> Result<Vec<Edge>> {
        self.check_assignment(asg)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| asg[self.layer_var[e.layer - 1] - 1] == e.bit)
            .copied()
            .collect())
    }

    /// Layer-by-layer forward closure from `u`, stopping at `last_layer`.
    fn forward(&self, asg: &[bool], u: Node, last_layer: usize) -> Vec<bool> {
        let mut frontier = vec![false; self.width + 1];
        frontier[u.index] = true;
        let mut edges = self.edges.range(
            Edge {
                layer: u.layer,
                from: 0,
                to: 0,
                bit: false,
            }..,
        );
        let mut pending = edges.next();
        for layer in u.layer..last_layer {
            let value = asg[self.layer_var[layer - 1] - 1];
            let mut next = vec![false; self.width + 1];
            while let Some(e) = pending {
                if e.layer != layer {
                    break;
                }
                if e.bit == value && frontier[e.from] {
                    next[e.to] = true;
                }
                pending = edges.next();
            }
            frontier = next;
        }
        frontier
    }

    /// Whether `v` is reachable from `u` under `asg`.
    pub fn reachable(&self, asg: &[bool], u: Node, v: Node) -> Result<bool> {
        self.check_assignment(asg)?;
        self.check_node(u)?;
        self.check_node(v)?;
        if v.layer < u.layer {
            return Ok(false);
        }
        if v.layer == u.layer {
            return Ok(u == v);
        }
        Ok(self.forward(asg, u, v.layer)[v.index])
    }

    pub fn evaluate(&self, asg: &[bool]) -> Result<bool> {
        self.reachable(asg, self.start(), self.accept())
    }

    /// Lexicographically first satisfying assignment (`x_1` most significant).
    pub fn brute_force_sat(&self) -> Result<Option<Vec<bool>>> {
        if self.n > MAX_BRUTE_FORCE_VARS {
            return refused(format!(
                "brute force over {} variables exceeds the limit of {MAX_BRUTE_FORCE_VARS}",
                self.n
            ));
        }
        for mask in 0u64..(1u64 << self.n) {
            let asg = bits_msb_first(mask, self.n);
            if self.evaluate(&asg)? {
                return Ok(Some(asg));
            }
        }
        Ok(None)
    }

    /// First pair `(a, b)` in `s1 x s2` (row-major) whose concatenation is accepted.
    pub fn satisfying_pair(
        &self,
        s1: &[Vec<bool>],
        s2: &[Vec<bool>],
    ) -> Result<Option<(Vec<bool>, Vec<bool>)>> {
        let half = self.half()?;
        for h in s1.iter().chain(s2) {
            if h.len() != half {
                return input(format!("half-assignment has {} bits, expected {half}", h.len()));
            }
        }
        for a in s1 {
            for b in s2 {
                let joined = SplitAssignment::new(a.clone(), b.clone())?.joined();
                if self.evaluate(&joined)? {
                    return Ok(Some((a.clone(), b.clone())));
                }
            }
        }
        Ok(None)
    }

    /// `n / 2`, or an error when `n` is odd.
    pub fn half(&self) -> Result<usize> {
        if !self.n.is_multiple_of(2) {
            return input(format!("n = {} is odd; the variables cannot be split in halves", self.n));
        }
        Ok(self.n / 2)
    }
}

/// The two halves `a` (variables `1..=n/2`) and `b` (the rest) of an input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitAssignment {
    pub a: Vec<bool>,
    pub b: Vec<bool>,
}

impl SplitAssignment {
    pub fn new(a: Vec<bool>, b: Vec<bool>) -> Result<Self> {
        if a.len() != b.len() {
            return input("halves must have equal length");
        }
        Ok(SplitAssignment { a, b })
    }

    pub fn joined(&self) -> Vec<bool> {
        let mut v = self.a.clone();
        v.extend_from_slice(&self.b);
        v
    }
}

/// Bits of `mask` as a vector of length `len`, most significant first.
pub fn bits_msb_first(mask: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| (mask >> (len - 1 - i)) & 1 == 1).collect()
}

/// All `2^len` bit vectors in lexicographic order.
pub fn all_assignments(len: usize) -> Vec<Vec<bool>> {
    (0u64..(1u64 << len)).map(|m| bits_msb_first(m, len)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize, layers: usize) -> BranchingProgram {
        let vars = (0..layers - 1).map(|i| i % n + 1).collect();
        let edges = (1..layers).flat_map(|i| {
            [false, true].map(|bit| Edge {
                layer: i,
                from: 1,
                to: 1,
                bit,
            })
        });
        BranchingProgram::new(n, layers, 2, vars, edges).unwrap()
    }

    #[test]
    fn single_edge_subgraph() {
        let e = Edge {
            layer: 1,
            from: 1,
            to: 1,
            bit: false,
        };
        let bp = BranchingProgram::new(1, 2, 1, vec![1], [e]).unwrap();
        assert_eq!(bp.induced_subgraph(&[false]).unwrap(), vec![e]);
        assert!(bp.induced_subgraph(&[true]).unwrap().is_empty());
        assert!(bp.evaluate(&[false]).unwrap());
        assert!(!bp.evaluate(&[true]).unwrap());
    }

    #[test]
    fn assignment_length_is_checked() {
        let bp = chain(2, 3);
        assert!(matches!(bp.evaluate(&[true]), Err(crate::Error::Input(_))));
        assert!(bp.induced_subgraph(&[true, false, true]).is_err());
    }

    #[test]
    fn chain_accepts_everything() {
        let bp = chain(3, 5);
        for asg in all_assignments(3) {
            assert!(bp.evaluate(&asg).unwrap());
        }
        assert_eq!(bp.brute_force_sat().unwrap(), Some(vec![false; 3]));
    }

    #[test]
    fn unreachable_accept() {
        let edges = [Edge {
            layer: 1,
            from: 1,
            to: 2,
            bit: true,
        }];
        let bp = BranchingProgram::new(2, 2, 2, vec![1], edges).unwrap();
        for asg in all_assignments(2) {
            assert!(!bp.evaluate(&asg).unwrap());
        }
        assert_eq!(bp.brute_force_sat().unwrap(), None);
    }

    #[test]
    fn same_layer_reachability() {
        let bp = chain(2, 3);
        let asg = [false, false];
        assert!(!bp.reachable(&asg, Node::new(2, 1), Node::new(2, 2)).unwrap());
        assert!(bp.reachable(&asg, Node::new(2, 1), Node::new(2, 1)).unwrap());
        assert!(bp.reachable(&asg, Node::new(1, 1), Node::new(2, 1)).unwrap());
        assert!(bp.reachable(&asg, Node::new(1, 1), Node::new(4, 1)).is_err());
    }

    #[test]
    fn rejects_malformed_programs() {
        assert!(BranchingProgram::new(1, 3, 2, vec![1], []).is_err());
        assert!(BranchingProgram::new(1, 2, 2, vec![2], []).is_err());
        let bad = Edge {
            layer: 2,
            from: 1,
            to: 1,
            bit: true,
        };
        assert!(BranchingProgram::new(1, 2, 2, vec![1], [bad]).is_err());
    }

    #[test]
    fn satisfying_pair_edge_cases() {
        let bp = chain(2, 3);
        assert_eq!(bp.satisfying_pair(&[], &all_assignments(1)).unwrap(), None);
        assert!(bp
            .satisfying_pair(&all_assignments(1), &all_assignments(1))
            .unwrap()
            .is_some());
        let odd = chain(3, 3);
        assert!(odd.satisfying_pair(&[], &[]).is_err());
    }

    #[test]
    fn brute_force_guard() {
        let bp = chain(25, 3);
        assert!(matches!(bp.brute_force_sat(), Err(crate::Error::Refused(_))));
    }
}
