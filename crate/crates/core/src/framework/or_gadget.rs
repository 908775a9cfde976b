use crate::error::{input, Result};

use super::binding::Binding;
use super::types::{uniform_tag, GadgetInstance, Role, TypeTag};

/// Output of [`or_gadget`]: `delta(x, y) = offset + min_{i,j} delta(x_i, y_j)`.
#[derive(Debug, Clone)]
pub struct OrGadget {
    pub x: GadgetInstance,
    pub y: GadgetInstance,
    pub offset: i64,
}

fn inner(site: &str) -> String {
    format!("{site}.in")
}

fn outer(site: &str) -> String {
    format!("{site}.out")
}

/// Tags of the inner gadgets `x'` and `y'_j`.
fn inner_tags<B: Binding>(
    binding: &mut B,
    site: &str,
    count: usize,
    tau_x: TypeTag,
    tau_y: TypeTag,
) -> Result<(TypeTag, TypeTag)> {
    let site = inner(site);
    let x = binding.align_tag(&site, Role::X, count, tau_x, 1, tau_y)?;
    let y = binding.align_tag(&site, Role::Y, 1, tau_y, count, tau_x)?;
    Ok((x, y))
}

/// Tags of the OR gadget outputs for `count` pairs of the given types.
pub fn or_tags<B: Binding>(
    binding: &mut B,
    site: &str,
    count: usize,
    tau_x: TypeTag,
    tau_y: TypeTag,
) -> Result<(TypeTag, TypeTag)> {
    let (ix, iy) = inner_tags(binding, site, count, tau_x, tau_y)?;
    let out = outer(site);
    let x = binding.align_tag(&out, Role::X, 1, ix, count, iy)?;
    let y = binding.align_tag(&out, Role::Y, count, iy, 1, ix)?;
    Ok((x, y))
}

pub fn or_offset<B: Binding>(
    binding: &mut B,
    site: &str,
    count: usize,
    tau_x: TypeTag,
    tau_y: TypeTag,
) -> Result<i64> {
    let (ix, iy) = inner_tags(binding, site, count, tau_x, tau_y)?;
    Ok(binding.align_offset(count, 1, tau_x, tau_y) + binding.align_offset(1, count, ix, iy))
}

/// The X side of an OR gadget, to be paired with `count` Y instances of `tau_y`.
pub fn or_x<B: Binding>(
    binding: &mut B,
    site: &str,
    xs: &[GadgetInstance],
    tau_y: TypeTag,
) -> Result<GadgetInstance> {
    let tau_x = uniform_tag(xs)?;
    let (_, iy) = inner_tags(binding, site, xs.len(), tau_x, tau_y)?;
    let x = binding.align(&inner(site), Role::X, xs, 1, tau_y)?;
    binding.align(&outer(site), Role::X, &[x], xs.len(), iy)
}

pub fn or_y<B: Binding>(
    binding: &mut B,
    site: &str,
    ys: &[GadgetInstance],
    tau_x: TypeTag,
) -> Result<GadgetInstance> {
    let tau_y = uniform_tag(ys)?;
    let (ix, _) = inner_tags(binding, site, ys.len(), tau_x, tau_y)?;
    let wrapped = ys
        .iter()
        .map(|y| binding.align(&inner(site), Role::Y, std::slice::from_ref(y), ys.len(), tau_x))
        .collect::<Result<Vec<_>>>()?;
    binding.align(&outer(site), Role::Y, &wrapped, 1, ix)
}

/// Builds both sides from equal-length lists.
pub fn or_gadget<B: Binding>(
    binding: &mut B,
    site: &str,
    xs: &[GadgetInstance],
    ys: &[GadgetInstance],
) -> Result<OrGadget> {
    if xs.len() != ys.len() {
        return input(format!("OR gadget needs equal list lengths, got {} and {}", xs.len(), ys.len()));
    }
    let tau_x = uniform_tag(xs)?;
    let tau_y = uniform_tag(ys)?;
    let x = or_x(binding, site, xs, tau_y)?;
    let y = or_y(binding, site, ys, tau_x)?;
    let offset = or_offset(binding, site, xs.len(), tau_x, tau_y)?;
    Ok(OrGadget { x, y, offset })
}
