//! Line-oriented program format:
//!
//! ```text
//! bp n=<n> T=<T> W=<W>
//! layer <i> var <f(i)>
//! edge <i> <j> <j'> <bit>
//! ```
//!
//! `#` starts a comment. `serialize_bp` output is canonical: layers in
//! order, then edges sorted.

use std::fmt::Write;

use super::{BranchingProgram, Edge};
use crate::error::{Error, Result};

pub fn serialize_bp(bp: &BranchingProgram) -> String {
    let mut out = format!("bp n={} T={} W={}\n", bp.num_vars(), bp.num_layers(), bp.width());
    for (i, v) in bp.layer_vars().iter().enumerate() {
        writeln!(out, "layer {} var {v}", i + 1).unwrap();
    }
    for e in bp.edges() {
        writeln!(out, "edge {} {} {} {}", e.layer, e.from, e.to, e.bit as u8).unwrap();
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn number(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| err(line, format!("expected a number, found {tok:?}")))
}

fn keyed(tok: Option<&str>, key: &str, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {key}=")))?;
    let value = tok
        .strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| err(line, format!("expected {key}=<value>, found {tok:?}")))?;
    number(value, line)
}

pub fn parse_bp(text: &str) -> Result<BranchingProgram> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut vars: Vec<Option<usize>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some(&kind) = toks.first() else { continue };
        let Some((n, layers, width)) = header else {
            if kind != "bp" || toks.len() != 4 {
                return Err(err(line, "expected header `bp n=<n> T=<T> W=<W>`"));
            }
            let h = (
                keyed(toks.get(1).copied(), "n", line)?,
                keyed(toks.get(2).copied(), "T", line)?,
                keyed(toks.get(3).copied(), "W", line)?,
            );
            if h.1 == 0 || h.2 == 0 {
                return Err(err(line, "T and W must be positive"));
            }
            vars = vec![None; h.1 - 1];
            header = Some(h);
            continue;
        };
        match kind {
            "layer" => {
                if toks.len() != 4 || toks[2] != "var" {
                    return Err(err(line, "expected `layer <i> var <v>`"));
                }
                let (i, v) = (number(toks[1], line)?, number(toks[3], line)?);
                if i == 0 || i >= layers {
                    return Err(err(line, format!("layer {i} has no variable slot (T={layers})")));
                }
                if v == 0 || v > n {
                    return Err(err(line, format!("variable {v} outside 1..={n}")));
                }
                if vars[i - 1].replace(v).is_some() {
                    return Err(err(line, format!("layer {i} declared twice")));
                }
            }
            "edge" => {
                if toks.len() != 5 {
                    return Err(err(line, "expected `edge <i> <j> <j'> <bit>`"));
                }
                let nums = toks[1..]
                    .iter()
                    .map(|t| number(t, line))
                    .collect::<Result<Vec<_>>>()?;
                let (layer, from, to, bit) = (nums[0], nums[1], nums[2], nums[3]);
                if layer == 0 || layer >= layers {
                    return Err(err(line, format!("edge leaves layer {layer}, which has no successor")));
                }
                if from == 0 || from > width || to == 0 || to > width {
                    return Err(err(line, format!("node index outside 1..={width}")));
                }
                if bit > 1 {
                    return Err(err(line, format!("label {bit} is not a bit")));
                }
                edges.push(Edge { layer, from, to, bit: bit == 1 });
            }
            other => return Err(err(line, format!("unknown directive {other:?}"))),
        }
    }
    let Some((n, layers, width)) = header else {
        return Err(err(text.lines().count().max(1), "missing header"));
    };
    let vars = vars
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| err(text.lines().count(), format!("layer {} has no variable", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    BranchingProgram::new(n, layers, width, vars, edges)
}
