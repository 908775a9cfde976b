//! Sequence files:
//!
//! ```text
//! alphabet <count>
//! sym <id> weight <w>
//! seq <id> <id> ...
//! ```
//!
//! Weights may be omitted (`sym <id>`), meaning 1. The `seq` line may wrap;
//! every token after it is a symbol id.

use std::fmt::Write;
use std::sync::Arc;

use super::alphabet::{Symbol, WeightedAlphabet, WeightedSequence};
use crate::error::{Error, Result};

const IDS_PER_LINE: usize = 32;

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Writes `seq`; unit-weight alphabets are written without weights.
pub fn write_sequence(seq: &WeightedSequence) -> String {
    let alphabet = seq.alphabet();
    let unit = alphabet.weights().iter().all(|&w| w == 1);
    let mut out = format!("alphabet {}\n", alphabet.len());
    for (id, w) in alphabet.weights().iter().enumerate() {
        if unit {
            writeln!(out, "sym {id}").unwrap();
        } else {
            writeln!(out, "sym {id} weight {w}").unwrap();
        }
    }
    out.push_str("seq");
    for (i, s) in seq.symbols().iter().enumerate() {
        out.push(if i > 0 && i % IDS_PER_LINE == 0 { '\n' } else { ' ' });
        write!(out, "{s}").unwrap();
    }
    out.push('\n');
    out
}

/// Writes an already expanded sequence over `alphabet_size` unit-weight symbols.
pub fn write_unweighted(alphabet_size: usize, seq: &[Symbol]) -> String {
    let alphabet = Arc::new(WeightedAlphabet::uniform(alphabet_size));
    write_sequence(&WeightedSequence::new(alphabet, seq.to_vec()).expect("ids within alphabet"))
}

pub fn parse_sequence(text: &str) -> Result<WeightedSequence> {
    let mut weights: Option<Vec<Option<u64>>> = None;
    let mut symbols: Option<Vec<Symbol>> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let number = |t: &str| -> Result<u64> {
            t.parse().map_err(|_| err(line, format!("expected a number, found {t:?}")))
        };
        if let Some(body) = symbols.as_mut() {
            for t in &toks {
                body.push(Symbol::try_from(number(t)?).map_err(|_| err(line, "id too large"))?);
            }
            continue;
        }
        match (toks[0], weights.as_mut()) {
            ("alphabet", None) if toks.len() == 2 => {
                weights = Some(vec![None; number(toks[1])? as usize]);
            }
            ("sym", Some(ws)) if toks.len() == 2 || (toks.len() == 4 && toks[2] == "weight") => {
                let id = number(toks[1])? as usize;
                let w = if toks.len() == 4 { number(toks[3])? } else { 1 };
                if w == 0 {
                    return Err(err(line, "weights must be positive"));
                }
                let slot = ws
                    .get_mut(id)
                    .ok_or_else(|| err(line, format!("symbol {id} outside the declared alphabet")))?;
                if slot.replace(w).is_some() {
                    return Err(err(line, format!("symbol {id} declared twice")));
                }
            }
            ("seq", Some(_)) => {
                let mut body = Vec::new();
                for t in &toks[1..] {
                    body.push(Symbol::try_from(number(t)?).map_err(|_| err(line, "id too large"))?);
                }
                symbols = Some(body);
            }
            _ => return Err(err(line, format!("unexpected line {raw:?}"))),
        }
    }
    let weights = weights.ok_or_else(|| err(last_line.max(1), "missing `alphabet` header"))?;
    let symbols = symbols.ok_or_else(|| err(last_line.max(1), "missing `seq` body"))?;
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| err(last_line, format!("symbol {i} never declared"))))
        .collect::<Result<Vec<_>>>()?;
    let alphabet = Arc::new(WeightedAlphabet::from_weights(weights)?);
    WeightedSequence::new(alphabet, symbols)
}
