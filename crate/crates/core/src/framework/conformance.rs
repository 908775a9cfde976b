use crate::error::Result;

use super::binding::Binding;
use super::types::{enumerate_alignments, structured_alignments, uniform_tag, GadgetInstance, Role};

/// Outcome of [`check_alignment_gadget`]. Violations are collected, not
/// raised.
#[derive(Debug, Clone)]
pub struct ConformanceReport {
    pub x_count: usize,
    pub y_count: usize,
    pub delta: u64,
    pub offset: i64,
    /// Minimum cost over all partial alignments.
    pub min_cost: u64,
    pub min_structured_cost: u64,
    /// `max(|x|, |y|) / (n (l_X + l_Y))` with `n` the longer list length.
    pub realized_c: f64,
    pub violations: Vec<String>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds an alignment gadget pair from `xs` and `ys` and checks the
/// bracket `min cost <= delta - C <= min structured cost`, that output types
/// depend only on list shapes, and the size bound.
pub fn check_alignment_gadget<B: Binding>(
    binding: &mut B,
    site: &str,
    xs: &[GadgetInstance],
    ys: &[GadgetInstance],
) -> Result<ConformanceReport> {
    let tau_x = uniform_tag(xs)?;
    let tau_y = uniform_tag(ys)?;
    let x = binding.align(site, Role::X, xs, ys.len(), tau_y)?;
    let y = binding.align(site, Role::Y, ys, xs.len(), tau_x)?;
    let delta = binding.delta(&x, &y);
    let offset = binding.align_offset(xs.len(), ys.len(), tau_x, tau_y);

    let x_long = xs.len() >= ys.len();
    let (long, short) = if x_long { (xs, ys) } else { (ys, xs) };
    let dist: Vec<Vec<u64>> = long
        .iter()
        .map(|l| {
            short
                .iter()
                .map(|s| if x_long { binding.delta(l, s) } else { binding.delta(s, l) })
                .collect()
        })
        .collect();
    let (n, m) = (long.len(), short.len());
    let min_cost = enumerate_alignments(n, m)?
        .iter()
        .map(|a| a.cost(&dist))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(0);
    let min_structured_cost = structured_alignments(n, m)?
        .iter()
        .map(|a| a.cost(&dist))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(0);

    let mut violations = Vec::new();
    let shifted = delta as i64 - offset;
    if shifted < min_cost as i64 {
        violations.push(format!("delta - C = {shifted} is below the minimum cost {min_cost}"));
    }
    if shifted > min_structured_cost as i64 {
        violations.push(format!(
            "delta - C = {shifted} exceeds the minimum structured cost {min_structured_cost}"
        ));
    }

    for (role, items, other_count, other_tag, built) in [
        (Role::X, xs, ys.len(), tau_y, &x),
        (Role::Y, ys, xs.len(), tau_x, &y),
    ] {
        for probe in [items.first(), items.last()].into_iter().flatten() {
            let replicated = vec![probe.clone(); items.len()];
            let rebuilt = binding.align(site, role, &replicated, other_count, other_tag)?;
            if rebuilt.tag != built.tag {
                violations.push(format!("{role:?} output type depends on the payload"));
            }
        }
        let predicted = binding.align_tag(site, role, items.len(), items[0].tag, other_count, other_tag)?;
        if predicted != built.tag {
            violations.push(format!("{role:?} output type differs from the predicted type"));
        }
    }

    let scale = n as u64 * (tau_x.length + tau_y.length);
    let largest = x.tag.length.max(y.tag.length);
    if largest > binding.size_constant() * scale {
        violations.push(format!(
            "output length {largest} exceeds {} * {scale}",
            binding.size_constant()
        ));
    }

    Ok(ConformanceReport {
        x_count: xs.len(),
        y_count: ys.len(),
        delta,
        offset,
        min_cost,
        min_structured_cost,
        realized_c: largest as f64 / scale as f64,
        violations,
    })
}
