use crate::error::{input, Result};
use crate::measures::{wlcs_symbols, AlphabetBuilder};

use super::types::{uniform_tag, GadgetInstance, Role, TypeTag};

/// A similarity measure together with coordinate values and an alignment
/// gadget construction.
///
/// `align` is called separately for the two sides; it must produce the same
/// separator letters for equal `site` names so that independently built
/// instances fit together.
pub trait Binding {
    fn alphabet(&self) -> &AlphabetBuilder;

    /// The distance `delta(x, y)`.
    fn delta(&self, x: &GadgetInstance, y: &GadgetInstance) -> u64;

    fn coordinate(&mut self, role: Role, bit: bool) -> Result<GadgetInstance>;

    /// Alignment gadget over `items`, to be paired with a list of
    /// `other_count` instances of type `other_tag`.
    fn align(
        &mut self,
        site: &str,
        role: Role,
        items: &[GadgetInstance],
        other_count: usize,
        other_tag: TypeTag,
    ) -> Result<GadgetInstance>;

    /// Type `align` would return for `count` items of type `tag`.
    fn align_tag(
        &mut self,
        site: &str,
        role: Role,
        count: usize,
        tag: TypeTag,
        other_count: usize,
        other_tag: TypeTag,
    ) -> Result<TypeTag>;

    /// The offset `C` of the gadget pair built from `x_count` instances of
    /// type `tau_x` and `y_count` of type `tau_y`.
    fn align_offset(&self, x_count: usize, y_count: usize, tau_x: TypeTag, tau_y: TypeTag) -> i64;

    /// Constant `c` with `|x|, |y| <= c * n * (l_X + l_Y)`.
    fn size_constant(&self) -> u64;
}

/// `delta(x, y) = |x| + |y| - 2 lcs(x, y)` over an unbounded alphabet.
///
/// Alignment gadgets put the longer list (X on ties) as
/// `S (M x_1 S) ... (M x_n S)` and the shorter one as
/// `S^{n-m+1} M y_1 S M y_2 ... S M y_m S^{n-m+1}`, where `S` outweighs any
/// single entry pair and `M` outweighs either entry.
#[derive(Debug, Clone)]
pub struct LcsBinding {
    alphabet: AlphabetBuilder,
}

const SIZE_CONSTANT: u64 = 8;

struct Shape {
    long_count: usize,
    short_count: usize,
    long_len: u64,
    sep: u64,
    mark: u64,
}

fn shape(x_count: usize, y_count: usize, tau_x: TypeTag, tau_y: TypeTag) -> Shape {
    let max = tau_x.length.max(tau_y.length);
    let (long_count, short_count, long_len) = if x_count >= y_count {
        (x_count, y_count, tau_x.length)
    } else {
        (y_count, x_count, tau_y.length)
    };
    Shape { long_count, short_count, long_len, sep: 2 * max + 1, mark: max + 1 }
}

impl LcsBinding {
    pub fn new() -> Result<Self> {
        let mut alphabet = AlphabetBuilder::new();
        for letter in ["a", "b", "c"] {
            alphabet.intern(letter, 1)?;
        }
        Ok(LcsBinding { alphabet })
    }

    fn separators(&mut self, site: &str, s: &Shape) -> Result<(u32, u32)> {
        let sep = self.alphabet.intern(&format!("{site}/sep"), s.sep)?;
        let mark = self.alphabet.intern(&format!("{site}/mark"), s.mark)?;
        Ok((sep, mark))
    }

    fn tags(role: Role, count: usize, tag: TypeTag, other_count: usize, other_tag: TypeTag) -> (usize, usize, TypeTag, TypeTag) {
        match role {
            Role::X => (count, other_count, tag, other_tag),
            Role::Y => (other_count, count, other_tag, tag),
        }
    }

    fn is_long(role: Role, x_count: usize, y_count: usize) -> bool {
        match role {
            Role::X => x_count >= y_count,
            Role::Y => y_count > x_count,
        }
    }
}

impl Binding for LcsBinding {
    fn alphabet(&self) -> &AlphabetBuilder {
        &self.alphabet
    }

    fn delta(&self, x: &GadgetInstance, y: &GadgetInstance) -> u64 {
        let common = wlcs_symbols(&x.seq, &y.seq, self.alphabet.weights());
        x.tag.length + y.tag.length - 2 * common
    }

    fn coordinate(&mut self, role: Role, bit: bool) -> Result<GadgetInstance> {
        let word = match (role, bit) {
            (Role::X, false) => "ba",
            (Role::X, true) => "ab",
            (Role::Y, false) => "aba",
            (Role::Y, true) => "bac",
        };
        let seq = word
            .chars()
            .map(|c| self.alphabet.lookup(&c.to_string()).expect("base letters interned"))
            .collect();
        Ok(GadgetInstance::new(seq, self.alphabet.weights()))
    }

    fn align(
        &mut self,
        site: &str,
        role: Role,
        items: &[GadgetInstance],
        other_count: usize,
        other_tag: TypeTag,
    ) -> Result<GadgetInstance> {
        let tag = uniform_tag(items)?;
        if other_count == 0 {
            return input("the other list must be nonempty");
        }
        let (xc, yc, tx, ty) = Self::tags(role, items.len(), tag, other_count, other_tag);
        let s = shape(xc, yc, tx, ty);
        let (sep, mark) = self.separators(site, &s)?;
        let mut seq = Vec::new();
        if Self::is_long(role, xc, yc) {
            seq.push(sep);
            for item in items {
                seq.push(mark);
                seq.extend_from_slice(&item.seq);
                seq.push(sep);
            }
        } else {
            let pad = s.long_count - s.short_count + 1;
            seq.extend(std::iter::repeat_n(sep, pad));
            for (j, item) in items.iter().enumerate() {
                if j > 0 {
                    seq.push(sep);
                }
                seq.push(mark);
                seq.extend_from_slice(&item.seq);
            }
            seq.extend(std::iter::repeat_n(sep, pad));
        }
        Ok(GadgetInstance::new(seq, self.alphabet.weights()))
    }

    fn align_tag(
        &mut self,
        site: &str,
        role: Role,
        count: usize,
        tag: TypeTag,
        other_count: usize,
        other_tag: TypeTag,
    ) -> Result<TypeTag> {
        if count == 0 || other_count == 0 {
            return input("alignment gadgets need nonempty lists");
        }
        let (xc, yc, tx, ty) = Self::tags(role, count, tag, other_count, other_tag);
        let s = shape(xc, yc, tx, ty);
        self.separators(site, &s)?;
        let (seps, marks) = if Self::is_long(role, xc, yc) {
            (count + 1, count)
        } else {
            (2 * (s.long_count - s.short_count + 1) + count - 1, count)
        };
        Ok(TypeTag {
            length: seps as u64 * s.sep + marks as u64 * s.mark + count as u64 * tag.length,
            symbols: seps + marks + count * tag.symbols,
        })
    }

    fn align_offset(&self, x_count: usize, y_count: usize, tau_x: TypeTag, tau_y: TypeTag) -> i64 {
        let s = shape(x_count, y_count, tau_x, tau_y);
        ((s.long_count - s.short_count) as u64 * (s.sep + s.mark + s.long_len)) as i64
    }

    fn size_constant(&self) -> u64 {
        SIZE_CONSTANT
    }
}
