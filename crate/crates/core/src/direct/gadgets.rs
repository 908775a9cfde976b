use crate::bp::{BranchingProgram, Node};
use crate::error::{input, Result};
use crate::measures::{AlphabetBuilder, Symbol};

use super::tables::{score_tables, to_u64, ScoreTable};

/// Which half of the variables a two-party gadget encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone)]
struct LevelLetters {
    f: Symbol,
    g: Symbol,
    /// `pad[j - 1]`: private padding letter of party `j < K`.
    pad: Vec<Symbol>,
    /// `index[z - 1]`: the `z_k` letter for midpoint node `z`.
    index: Vec<Symbol>,
}

/// Builds reachability gadgets for one program.
///
/// Variables are split into `K` equal consecutive blocks, one per party.
/// Parties `1..K` use the padded template; party `K` uses the interleaved
/// one. With `K = 2` these are the `A` and `B` sides. All letters are
/// interned up front so each level occupies a contiguous id block.
#[derive(Debug, Clone)]
pub struct GadgetBuilder<'a> {
    bp: &'a BranchingProgram,
    parties: usize,
    tables: ScoreTable,
    alphabet: AlphabetBuilder,
    e: Symbol,
    /// `absent[j - 1]`: the `$_j` letter.
    absent: Vec<Symbol>,
    levels: Vec<LevelLetters>,
}

impl<'a> GadgetBuilder<'a> {
    /// Two-party builder.
    pub fn new(bp: &'a BranchingProgram) -> Result<Self> {
        Self::with_parties(bp, 2)
    }

    pub fn with_parties(bp: &'a BranchingProgram, parties: usize) -> Result<Self> {
        let Some(t) = bp.depth_exponent() else {
            return input(format!("T = {} is not of the form 2^t + 1", bp.num_layers()));
        };
        if parties < 2 {
            return input("at least two parties are needed");
        }
        if !bp.num_vars().is_multiple_of(parties) {
            return input(format!(
                "{} variables cannot be split into {parties} equal blocks",
                bp.num_vars()
            ));
        }
        let tables = score_tables(bp.width(), t)?;
        let mut alphabet = AlphabetBuilder::new();
        let e = alphabet.intern("e", 1)?;
        let absent = (1..=parties)
            .map(|j| alphabet.intern(&format!("${j}"), 1))
            .collect::<Result<Vec<_>>>()?;
        let mut levels = Vec::new();
        for k in 1..=t as usize {
            let pad_w = to_u64(&tables.w_pad(k), "w(f_k)")?;
            let index_w = to_u64(&tables.w_index(k), "w(z_k)")?;
            to_u64(&tables.z[k], "Z_k")?;
            let f = alphabet.intern(&format!("f{k}"), pad_w)?;
            let g = alphabet.intern(&format!("g{k}"), pad_w)?;
            let pad = (1..parties)
                .map(|j| alphabet.intern(&format!("#{k}/{j}"), pad_w))
                .collect::<Result<Vec<_>>>()?;
            let index = (1..=bp.width())
                .map(|z| alphabet.intern(&format!("z{k}/{z}"), index_w))
                .collect::<Result<Vec<_>>>()?;
            levels.push(LevelLetters { f, g, pad, index });
        }
        Ok(GadgetBuilder { bp, parties, tables, alphabet, e, absent, levels })
    }

    pub fn program(&self) -> &BranchingProgram {
        self.bp
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn tables(&self) -> &ScoreTable {
        &self.tables
    }

    pub fn alphabet(&self) -> &AlphabetBuilder {
        &self.alphabet
    }

    pub(crate) fn alphabet_mut(&mut self) -> &mut AlphabetBuilder {
        &mut self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Variables per party.
    pub fn block(&self) -> usize {
        self.bp.num_vars() / self.parties
    }

    fn party_of(&self, side: Side) -> Result<usize> {
        if self.parties != 2 {
            return input("sides are only defined for two-party builders");
        }
        Ok(match side {
            Side::A => 1,
            Side::B => 2,
        })
    }

    fn check(&self, party: usize, half: &[bool], u: Node, v: Node) -> Result<usize> {
        if party == 0 || party > self.parties {
            return input(format!("party {party} outside 1..={}", self.parties));
        }
        if half.len() != self.block() {
            return input(format!(
                "partial assignment has {} bits, expected {}",
                half.len(),
                self.block()
            ));
        }
        for node in [u, v] {
            if node.layer == 0
                || node.layer > self.bp.num_layers()
                || node.index == 0
                || node.index > self.bp.width()
            {
                return input(format!("node ({}, {}) is outside the program", node.layer, node.index));
            }
        }
        let dist = v.layer.saturating_sub(u.layer);
        if !dist.is_power_of_two() {
            return input(format!(
                "layers {} and {} are not a power of two apart",
                u.layer, v.layer
            ));
        }
        Ok(dist.trailing_zeros() as usize)
    }

    /// Level-0 gadget of `party` for the edge slot `u -> v`.
    fn leaf(&self, party: usize, half: &[bool], u: Node, v: Node) -> Symbol {
        let var = self.bp.layer_var(u.layer).expect("u is not on the last layer");
        let block = self.block();
        let owner = (var - 1) / block + 1;
        if owner != party {
            return self.e;
        }
        let value = half[var - 1 - (party - 1) * block];
        if self.bp.has_edge(u.layer, u.index, v.index, value) {
            self.e
        } else {
            self.absent[party - 1]
        }
    }

    fn emit(&self, party: usize, half: &[bool], u: Node, v: Node, k: usize, out: &mut Vec<Symbol>) {
        if k == 0 {
            out.push(self.leaf(party, half, u, v));
            return;
        }
        let width = self.bp.width();
        let letters = &self.levels[k - 1];
        let (f, g) = (letters.f, letters.g);
        let h = u.layer + (1 << (k - 1));
        let repeat = |out: &mut Vec<Symbol>, s: Symbol, n: usize| out.extend(std::iter::repeat_n(s, n));
        let core = |out: &mut Vec<Symbol>, z: usize| {
            let mid = Node::new(h, z);
            let zk = letters.index[z - 1];
            out.push(zk);
            self.emit(party, half, u, mid, k - 1, out);
            out.push(zk);
            self.emit(party, half, mid, v, k - 1, out);
            out.push(zk);
        };
        if party < self.parties {
            repeat(out, f, 2 * width);
            for z in 1..=width {
                out.push(g);
                core(out, z);
                out.push(g);
            }
            repeat(out, f, 2 * width);
            repeat(out, letters.pad[party - 1], 4 * width * (width - 1));
        } else {
            for z in 1..=width {
                out.push(f);
                repeat(out, g, 2 * width);
                core(out, z);
                repeat(out, g, 2 * width);
                out.push(f);
            }
        }
    }

    /// Reachability gadget of `party` for `u -> v` at level `k`; the layers
    /// must be exactly `2^k` apart.
    pub fn rg_party(&self, party: usize, half: &[bool], u: Node, v: Node, k: usize) -> Result<Vec<Symbol>> {
        let level = self.check(party, half, u, v)?;
        if level != k || k > self.depth() {
            return input(format!("layers {} and {} are not 2^{k} apart", u.layer, v.layer));
        }
        let mut out = Vec::new();
        self.emit(party, half, u, v, k, &mut out);
        Ok(out)
    }

    pub fn rg(&self, side: Side, half: &[bool], u: Node, v: Node, k: usize) -> Result<Vec<Symbol>> {
        self.rg_party(self.party_of(side)?, half, u, v, k)
    }

    /// Level-0 gadget: a single letter.
    pub fn rg_base(&self, side: Side, half: &[bool], u: Node, v: Node) -> Result<Vec<Symbol>> {
        if v.layer != u.layer + 1 {
            return input("base gadgets need adjacent layers");
        }
        self.rg(side, half, u, v, 0)
    }

    /// Gadget from the start node to the accept node.
    pub fn vector_gadget_party(&self, party: usize, half: &[bool]) -> Result<Vec<Symbol>> {
        self.rg_party(party, half, self.bp.start(), self.bp.accept(), self.depth())
    }

    pub fn vector_gadget(&self, side: Side, half: &[bool]) -> Result<Vec<Symbol>> {
        self.vector_gadget_party(self.party_of(side)?, half)
    }

    /// Total weight of `seq` under this builder's letters.
    pub fn weight(&self, seq: &[Symbol]) -> Result<u64> {
        self.alphabet.total(seq)
    }

    pub fn absent_letter(&self, party: usize) -> Symbol {
        self.absent[party - 1]
    }

    pub fn pad_letters(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.levels.iter().flat_map(|l| l.pad.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::{Edge, all_assignments};
    use crate::measures::wlcs_symbols;

    fn two_layer(bit: bool, var: usize) -> BranchingProgram {
        let edge = Edge { layer: 1, from: 1, to: 2, bit };
        BranchingProgram::new(2, 2, 2, vec![var], [edge]).unwrap()
    }

    #[test]
    fn base_case_letters() {
        let bp = two_layer(true, 1);
        let gb = GadgetBuilder::new(&bp).unwrap();
        let (u, v, other) = (Node::new(1, 1), Node::new(2, 2), Node::new(2, 1));
        let e = gb.alphabet().lookup("e").unwrap();
        let absent_a = gb.alphabet().lookup("$1").unwrap();
        assert_eq!(gb.rg_base(Side::A, &[true], u, v).unwrap(), vec![e]);
        assert_eq!(gb.rg_base(Side::A, &[false], u, v).unwrap(), vec![absent_a]);
        assert_eq!(gb.rg_base(Side::A, &[true], u, other).unwrap(), vec![absent_a]);
        // Variable 1 belongs to the a-half: the b-gadget is always `e`.
        for bit in [false, true] {
            assert_eq!(gb.rg_base(Side::B, &[bit], u, other).unwrap(), vec![e]);
        }
        let bp2 = two_layer(false, 2);
        let gb2 = GadgetBuilder::new(&bp2).unwrap();
        assert_eq!(gb2.rg_base(Side::B, &[true], u, v).unwrap(), vec![gb2.alphabet().lookup("$2").unwrap()]);
        assert_eq!(gb2.rg_base(Side::A, &[true], u, v).unwrap(), vec![e]);
    }

    #[test]
    fn input_validation() {
        let bp = crate::bp::random_bp(&crate::bp::RandomBpParams { n: 4, width: 2, t: 2, density: 0.5 }, 1).unwrap();
        let gb = GadgetBuilder::new(&bp).unwrap();
        let half = [false, true];
        assert!(gb.rg(Side::A, &half, Node::new(1, 1), Node::new(4, 1), 1).is_err());
        assert!(gb.rg(Side::A, &half, Node::new(1, 1), Node::new(3, 1), 2).is_err());
        assert!(gb.rg(Side::A, &[true], Node::new(1, 1), Node::new(3, 1), 1).is_err());
        assert!(gb.rg(Side::A, &half, Node::new(1, 3), Node::new(3, 1), 1).is_err());
        assert!(gb.rg_base(Side::A, &half, Node::new(1, 1), Node::new(3, 1)).is_err());
        assert!(GadgetBuilder::with_parties(&bp, 3).is_err());
        let odd = BranchingProgram::new(2, 4, 2, vec![1, 1, 2], []).unwrap();
        assert!(GadgetBuilder::new(&odd).is_err());
    }

    #[test]
    fn weights_and_dichotomy_on_one_program() {
        let bp = crate::bp::random_bp(&crate::bp::RandomBpParams { n: 4, width: 2, t: 1, density: 0.5 }, 9).unwrap();
        let gb = GadgetBuilder::new(&bp).unwrap();
        let w = gb.alphabet().weights();
        let (z1, y1) = (196, 80);
        for a in all_assignments(2) {
            for b in all_assignments(2) {
                let ga = gb.vector_gadget(Side::A, &a).unwrap();
                let gbv = gb.vector_gadget(Side::B, &b).unwrap();
                assert_eq!(gb.weight(&ga).unwrap(), z1);
                assert_eq!(gb.weight(&gbv).unwrap(), z1);
                let joined: Vec<bool> = a.iter().chain(&b).copied().collect();
                let score = wlcs_symbols(&ga, &gbv, w);
                if bp.evaluate(&joined).unwrap() {
                    assert_eq!(score, y1);
                } else {
                    assert!(score < y1);
                }
            }
        }
    }

    #[test]
    fn two_parties_match_sides() {
        let bp = crate::bp::random_bp(&crate::bp::RandomBpParams { n: 4, width: 3, t: 2, density: 0.4 }, 5).unwrap();
        let gb = GadgetBuilder::new(&bp).unwrap();
        let half = [true, false];
        assert_eq!(gb.vector_gadget(Side::A, &half).unwrap(), gb.vector_gadget_party(1, &half).unwrap());
        assert_eq!(gb.vector_gadget(Side::B, &half).unwrap(), gb.vector_gadget_party(2, &half).unwrap());
    }
}
