use std::collections::HashMap;

use crate::bp::{all_assignments, BranchingProgram, Node};
use crate::error::{input, Result};

use super::binding::Binding;
use super::or_gadget::{or_offset, or_tags, or_x, or_y};
use super::types::{GadgetInstance, Role, TypeTag};

/// Constants and types of one recursion level. Level 0 spans one layer,
/// level `k` spans `2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub rho: i64,
    /// Offset of the three-item path gadget; zero on level 0.
    pub path_offset: i64,
    /// Offset of the OR over midpoints, or of the base gadget on level 0.
    pub combine_offset: i64,
    pub tau_x: TypeTag,
    pub tau_y: TypeTag,
    /// Types of path gadgets; equal to `tau_*` on level 0.
    pub path_tau_x: TypeTag,
    pub path_tau_y: TypeTag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelConstants {
    pub rho_true: u64,
    pub rho_false: u64,
    /// Bits per midpoint index, `ceil(log2 W)`.
    pub index_bits: usize,
    pub levels: Vec<Level>,
}

impl LevelConstants {
    pub fn gap(&self) -> u64 {
        self.rho_false - self.rho_true
    }

    pub fn top(&self) -> &Level {
        self.levels.last().expect("level 0 always exists")
    }
}

/// Final instance pair with its acceptance threshold.
#[derive(Debug, Clone)]
pub struct FinalSequences {
    pub x: GadgetInstance,
    pub y: GadgetInstance,
    /// Largest distance reached by a satisfiable pair.
    pub threshold: i64,
    /// Distance when no pair satisfies.
    pub unsat_value: i64,
    pub nvg_offset: i64,
    pub final_offset: i64,
    pub a_halves: usize,
    pub b_halves: usize,
    /// Types of the X and Y normalized vector gadgets.
    pub entry_tags: (TypeTag, TypeTag),
}

impl FinalSequences {
    pub fn accepts(&self, delta: u64) -> bool {
        (delta as i64) <= self.threshold
    }
}

type CacheKey = (usize, Role, usize);

/// Builds the reachability gadgets of a branching program over a
/// [`Binding`].
pub struct FrameworkReduction<'p, B: Binding> {
    binding: B,
    bp: &'p BranchingProgram,
    depth: usize,
    constants: LevelConstants,
    coords: [[GadgetInstance; 2]; 2],
    index_cache: HashMap<CacheKey, GadgetInstance>,
    normalizer_cache: HashMap<CacheKey, GadgetInstance>,
}

fn role_index(role: Role) -> usize {
    match role {
        Role::X => 0,
        Role::Y => 1,
    }
}

fn base_site() -> String {
    "base".to_string()
}

fn path_site(k: usize) -> String {
    format!("pg{k}")
}

fn or_site(k: usize) -> String {
    format!("or{k}")
}

impl<'p, B: Binding> FrameworkReduction<'p, B> {
    pub fn new(mut binding: B, bp: &'p BranchingProgram) -> Result<Self> {
        bp.half()?;
        let Some(depth) = bp.depth_exponent() else {
            return input(format!("program has {} layers, not 2^t + 1", bp.num_layers()));
        };
        let depth = depth as usize;
        let coords = [
            [binding.coordinate(Role::X, false)?, binding.coordinate(Role::X, true)?],
            [binding.coordinate(Role::Y, false)?, binding.coordinate(Role::Y, true)?],
        ];
        if coords[0][0].tag != coords[0][1].tag || coords[1][0].tag != coords[1][1].tag {
            return input("coordinate values of one side must share a type");
        }
        let rho_true = binding.delta(&coords[0][0], &coords[1][0]);
        let rho_false = binding.delta(&coords[0][1], &coords[1][1]);
        let others = [
            binding.delta(&coords[0][0], &coords[1][1]),
            binding.delta(&coords[0][1], &coords[1][0]),
        ];
        if others.iter().any(|&d| d != rho_true) || rho_false <= rho_true {
            return input("coordinate values violate the required inequality");
        }
        let index_bits = bp.width().next_power_of_two().trailing_zeros() as usize;
        let count = 2 * index_bits + 2;
        let (cx, cy) = (coords[0][0].tag, coords[1][0].tag);
        let site = base_site();
        let tau_x = binding.align_tag(&site, Role::X, count, cx, count, cy)?;
        let tau_y = binding.align_tag(&site, Role::Y, count, cy, count, cx)?;
        let offset = binding.align_offset(count, count, cx, cy);
        let mut levels = vec![Level {
            rho: offset + count as i64 * rho_true as i64,
            path_offset: 0,
            combine_offset: offset,
            tau_x,
            tau_y,
            path_tau_x: tau_x,
            path_tau_y: tau_y,
        }];
        for k in 1..=depth {
            let prev = levels[k - 1];
            let site = path_site(k);
            let path_tau_x = binding.align_tag(&site, Role::X, 3, prev.tau_x, 3, prev.tau_y)?;
            let path_tau_y = binding.align_tag(&site, Role::Y, 3, prev.tau_y, 3, prev.tau_x)?;
            let path_offset = binding.align_offset(3, 3, prev.tau_x, prev.tau_y);
            let site = or_site(k);
            let width = bp.width();
            let (tau_x, tau_y) = or_tags(&mut binding, &site, width, path_tau_x, path_tau_y)?;
            let combine_offset = or_offset(&mut binding, &site, width, path_tau_x, path_tau_y)?;
            levels.push(Level {
                rho: combine_offset + path_offset + 3 * prev.rho,
                path_offset,
                combine_offset,
                tau_x,
                tau_y,
                path_tau_x,
                path_tau_y,
            });
        }
        Ok(FrameworkReduction {
            binding,
            bp,
            depth,
            constants: LevelConstants { rho_true, rho_false, index_bits, levels },
            coords,
            index_cache: HashMap::new(),
            normalizer_cache: HashMap::new(),
        })
    }

    pub fn binding(&self) -> &B {
        &self.binding
    }

    pub fn into_binding(self) -> B {
        self.binding
    }

    pub fn constants(&self) -> &LevelConstants {
        &self.constants
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn delta(&self, x: &GadgetInstance, y: &GadgetInstance) -> u64 {
        self.binding.delta(x, y)
    }

    fn coordinate(&self, role: Role, bit: bool) -> GadgetInstance {
        self.coords[role_index(role)][bit as usize].clone()
    }

    fn other_tag(&self, k: usize, role: Role) -> TypeTag {
        let level = &self.constants.levels[k];
        match role {
            Role::X => level.tau_y,
            Role::Y => level.tau_x,
        }
    }

    fn other_path_tag(&self, k: usize, role: Role) -> TypeTag {
        let level = &self.constants.levels[k];
        match role {
            Role::X => level.path_tau_y,
            Role::Y => level.path_tau_x,
        }
    }

    fn other_coordinate_tag(&self, role: Role) -> TypeTag {
        self.coords[1 - role_index(role)][0].tag
    }

    fn base(&mut self, role: Role, items: Vec<GadgetInstance>) -> Result<GadgetInstance> {
        let other = self.other_coordinate_tag(role);
        let count = items.len();
        self.binding.align(&base_site(), role, &items, count, other)
    }

    /// Base edge gadget. `bit` is the value the coordinate list repeats.
    pub fn eg(&mut self, role: Role, bit: bool) -> Result<GadgetInstance> {
        let mut items = vec![self.coordinate(role, bit); 2 * self.constants.index_bits];
        let tail = match role {
            Role::X => [true, false],
            Role::Y => [false, true],
        };
        items.extend(tail.iter().map(|&b| self.coordinate(role, b)));
        self.base(role, items)
    }

    fn check_index(&self, z: usize) -> Result<()> {
        if z == 0 || z > self.bp.width() {
            return input(format!("index {z} outside 1..={}", self.bp.width()));
        }
        Ok(())
    }

    /// Index gadget for midpoint `z` at level `k`.
    pub fn ig(&mut self, k: usize, role: Role, z: usize) -> Result<GadgetInstance> {
        self.check_index(z)?;
        self.check_level(k)?;
        if let Some(g) = self.index_cache.get(&(k, role, z)) {
            return Ok(g.clone());
        }
        let gadget = if k == 0 {
            let bits = self.constants.index_bits;
            let code: Vec<bool> = (0..bits).map(|i| ((z - 1) >> (bits - 1 - i)) & 1 == 1).collect();
            let mut items = Vec::with_capacity(2 * bits + 2);
            let (first, second, tail) = match role {
                Role::X => (false, true, [false, true]),
                Role::Y => (true, false, [true, false]),
            };
            items.extend(code.iter().map(|&c| self.coordinate(role, c ^ first)));
            items.extend(code.iter().map(|&c| self.coordinate(role, c ^ second)));
            items.extend(tail.iter().map(|&b| self.coordinate(role, b)));
            self.base(role, items)?
        } else {
            let prev = self.ig(k - 1, role, z)?;
            let triple = self.path(k, role, vec![prev.clone(), prev.clone(), prev])?;
            self.or(k, role, vec![triple; self.bp.width()])?
        };
        self.index_cache.insert((k, role, z), gadget.clone());
        Ok(gadget)
    }

    fn check_level(&self, k: usize) -> Result<()> {
        if k > self.depth {
            return input(format!("level {k} exceeds program depth {}", self.depth));
        }
        Ok(())
    }

    fn path(&mut self, k: usize, role: Role, items: Vec<GadgetInstance>) -> Result<GadgetInstance> {
        let other = self.other_tag(k - 1, role);
        self.binding.align(&path_site(k), role, &items, 3, other)
    }

    fn or(&mut self, k: usize, role: Role, items: Vec<GadgetInstance>) -> Result<GadgetInstance> {
        let other = self.other_path_tag(k, role);
        match role {
            Role::X => or_x(&mut self.binding, &or_site(k), &items, other),
            Role::Y => or_y(&mut self.binding, &or_site(k), &items, other),
        }
    }

    fn half_bit(&self, role: Role, half: &[bool], layer: usize) -> Option<bool> {
        let var = self.bp.layer_var(layer)?;
        let split = self.bp.num_vars() / 2;
        match role {
            Role::X if var <= split => Some(half[var - 1]),
            Role::Y if var > split => Some(half[var - 1 - split]),
            _ => None,
        }
    }

    fn check_span(&self, half: &[bool], u: Node, v: Node, k: usize) -> Result<()> {
        self.check_level(k)?;
        if half.len() != self.bp.num_vars() / 2 {
            return input(format!("half-assignment has {} bits", half.len()));
        }
        let ok = |n: Node| n.layer >= 1 && n.layer <= self.bp.num_layers() && n.index >= 1 && n.index <= self.bp.width();
        if !ok(u) || !ok(v) {
            return input("node outside the program");
        }
        if v.layer != u.layer + (1 << k) {
            return input(format!("layers {} and {} are not 2^{k} apart", u.layer, v.layer));
        }
        Ok(())
    }

    /// Reachability gadget for `u -> v` at level `k`, built from one half.
    pub fn rg(&mut self, k: usize, role: Role, half: &[bool], u: Node, v: Node) -> Result<GadgetInstance> {
        self.check_span(half, u, v, k)?;
        if k == 0 {
            let consistent = match self.half_bit(role, half, u.layer) {
                Some(bit) => self.bp.has_edge(u.layer, u.index, v.index, bit),
                None => false,
            };
            return self.eg(role, !consistent);
        }
        let paths = (1..=self.bp.width())
            .map(|z| self.pg(k, role, half, u, v, z))
            .collect::<Result<Vec<_>>>()?;
        self.or(k, role, paths)
    }

    /// Path gadget through midpoint `z` of the middle layer.
    pub fn pg(&mut self, k: usize, role: Role, half: &[bool], u: Node, v: Node, z: usize) -> Result<GadgetInstance> {
        self.check_span(half, u, v, k)?;
        self.check_index(z)?;
        if k == 0 {
            return input("path gadgets start at level 1");
        }
        let mid = Node::new(u.layer + (1 << (k - 1)), z);
        let first = self.rg(k - 1, role, half, u, mid)?;
        let second = self.rg(k - 1, role, half, mid, v)?;
        let index = self.ig(k - 1, role, z)?;
        self.path(k, role, vec![first, second, index])
    }

    /// The X-side normalizers `(S^k, T^k)`.
    pub fn normalizers(&mut self, k: usize) -> Result<(GadgetInstance, GadgetInstance)> {
        Ok((self.normalizer(k, true)?, self.normalizer(k, false)?))
    }

    fn normalizer(&mut self, k: usize, penalized: bool) -> Result<GadgetInstance> {
        self.check_level(k)?;
        let key = (k, Role::X, penalized as usize);
        if let Some(g) = self.normalizer_cache.get(&key) {
            return Ok(g.clone());
        }
        let gadget = if k == 0 {
            let mut items = vec![self.coordinate(Role::X, false); 2 * self.constants.index_bits + 2];
            if penalized {
                let n = items.len();
                items[n - 2] = self.coordinate(Role::X, true);
                items[n - 1] = self.coordinate(Role::X, true);
            }
            self.base(Role::X, items)?
        } else {
            let slack = self.normalizer(k - 1, false)?;
            let second = self.normalizer(k - 1, penalized)?;
            let paths = (1..=self.bp.width())
                .map(|z| {
                    let index = self.ig(k - 1, Role::X, z)?;
                    self.path(k, Role::X, vec![slack.clone(), second.clone(), index])
                })
                .collect::<Result<Vec<_>>>()?;
            self.or(k, Role::X, paths)?
        };
        self.normalizer_cache.insert(key, gadget.clone());
        Ok(gadget)
    }

    /// Normalized vector gadget of one half.
    pub fn nvg(&mut self, role: Role, half: &[bool]) -> Result<GadgetInstance> {
        let (start, accept, t) = (self.bp.start(), self.bp.accept(), self.depth);
        let rg = self.rg(t, role, half, start, accept)?;
        let other = self.other_tag(t, role);
        match role {
            Role::X => {
                let (penalty, _) = self.normalizers(t)?;
                self.binding.align("nvg", Role::X, &[penalty, rg], 1, other)
            }
            Role::Y => self.binding.align("nvg", Role::Y, &[rg], 2, other),
        }
    }

    /// Offset `C` of the normalized vector gadgets.
    pub fn nvg_offset(&self) -> i64 {
        let top = self.constants.top();
        self.binding.align_offset(2, 1, top.tau_x, top.tau_y)
    }

    /// Final sequences over every half-assignment on both sides.
    pub fn final_sequences(&mut self) -> Result<FinalSequences> {
        let halves = all_assignments(self.bp.half()?);
        self.final_sequences_for(&halves, &halves)
    }

    /// Final sequences over explicit half lists with `|b_halves| <= |a_halves|`.
    pub fn final_sequences_for(&mut self, a_halves: &[Vec<bool>], b_halves: &[Vec<bool>]) -> Result<FinalSequences> {
        if b_halves.is_empty() || b_halves.len() > a_halves.len() {
            return input("need 1 <= |b halves| <= |a halves|");
        }
        let xs = a_halves
            .iter()
            .map(|a| self.nvg(Role::X, a))
            .collect::<Result<Vec<_>>>()?;
        let ys = b_halves
            .iter()
            .map(|b| self.nvg(Role::Y, b))
            .collect::<Result<Vec<_>>>()?;
        let doubled: Vec<GadgetInstance> = xs.iter().chain(&xs).cloned().collect();
        let (tx, ty) = (xs[0].tag, ys[0].tag);
        let x = self.binding.align("final", Role::X, &doubled, ys.len(), ty)?;
        let y = self.binding.align("final", Role::Y, &ys, doubled.len(), tx)?;
        let final_offset = self.binding.align_offset(doubled.len(), ys.len(), tx, ty);
        let nvg_offset = self.nvg_offset();
        let satisfied = nvg_offset + self.constants.top().rho;
        let unsatisfied = satisfied + self.constants.gap() as i64;
        let rest = ys.len() as i64 - 1;
        Ok(FinalSequences {
            x,
            y,
            threshold: final_offset + rest * unsatisfied + satisfied,
            unsat_value: final_offset + ys.len() as i64 * unsatisfied,
            nvg_offset,
            final_offset,
            a_halves: a_halves.len(),
            b_halves: b_halves.len(),
            entry_tags: (tx, ty),
        })
    }
}
