use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{input, refused, Result};

/// Symbols are dense indices into their alphabet.
pub type Symbol = u32;

/// Default cap on the length of an expanded (unweighted) sequence.
pub const DEFAULT_MAX_EXPAND: u64 = 10_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedAlphabet {
    names: Vec<String>,
    weights: Vec<u64>,
}

impl WeightedAlphabet {
    /// Alphabet with anonymous symbols `0..weights.len()`.
    pub fn from_weights(weights: Vec<u64>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return input(format!("symbol {i} has weight 0"));
        }
        let names = (0..weights.len()).map(|i| i.to_string()).collect();
        Ok(WeightedAlphabet { names, weights })
    }

    /// `size` symbols of weight 1.
    pub fn uniform(size: usize) -> Self {
        WeightedAlphabet {
            names: (0..size).map(|i| i.to_string()).collect(),
            weights: vec![1; size],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, s: Symbol) -> u64 {
        self.weights[s as usize]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s as usize]
    }

    pub fn contains(&self, s: Symbol) -> bool {
        (s as usize) < self.weights.len()
    }
}

/// Interns named symbols during a construction session.
///
/// Asking for an existing name with a different weight is an error, which
/// catches two construction sites accidentally sharing a letter.
#[derive(Debug, Default, Clone)]
pub struct AlphabetBuilder {
    alphabet: WeightedAlphabet,
    index: HashMap<String, Symbol>,
}

impl AlphabetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str, weight: u64) -> Result<Symbol> {
        if weight == 0 {
            return input(format!("letter {name} must have positive weight"));
        }
        if let Some(&s) = self.index.get(name) {
            let have = self.alphabet.weights[s as usize];
            if have != weight {
                return input(format!("letter {name} already has weight {have}, not {weight}"));
            }
            return Ok(s);
        }
        let s = Symbol::try_from(self.alphabet.len())
            .or_else(|_| refused("alphabet exceeds the symbol id range"))?;
        self.alphabet.names.push(name.to_string());
        self.alphabet.weights.push(weight);
        self.index.insert(name.to_string(), s);
        Ok(s)
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn weight(&self, s: Symbol) -> u64 {
        self.alphabet.weight(s)
    }

    pub fn weights(&self) -> &[u64] {
        self.alphabet.weights()
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    /// Sum of weights of `seq`, refusing on overflow.
    pub fn total(&self, seq: &[Symbol]) -> Result<u64> {
        checked_total(seq, &self.alphabet.weights)
    }

    pub fn freeze(self) -> Arc<WeightedAlphabet> {
        Arc::new(self.alphabet)
    }

    pub fn snapshot(&self) -> Arc<WeightedAlphabet> {
        Arc::new(self.alphabet.clone())
    }
}

pub(crate) fn checked_total(seq: &[Symbol], weights: &[u64]) -> Result<u64> {
    seq.iter().try_fold(0u64, |acc, &s| {
        acc.checked_add(weights[s as usize])
            .map_or_else(|| refused("total weight overflows 64 bits"), Ok)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSequence {
    alphabet: Arc<WeightedAlphabet>,
    symbols: Vec<Symbol>,
    total: u64,
}

impl WeightedSequence {
    pub fn new(alphabet: Arc<WeightedAlphabet>, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return input(format!("symbol {s} is not in the alphabet"));
        }
        let total = checked_total(&symbols, alphabet.weights())?;
        Ok(WeightedSequence { alphabet, symbols, total })
    }

    pub fn alphabet(&self) -> &Arc<WeightedAlphabet> {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Sum of the weights of all symbols.
    pub fn total_length(&self) -> u64 {
        self.total
    }

    pub fn same_alphabet(&self, other: &WeightedSequence) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    /// Maximal runs of equal symbols in the expanded sequence, as
    /// `(symbol, length)` pairs.
    pub fn runs(&self) -> Vec<(Symbol, u64)> {
        let mut out: Vec<(Symbol, u64)> = Vec::new();
        for &s in &self.symbols {
            let w = self.alphabet.weight(s);
            match out.last_mut() {
                Some((last, len)) if *last == s => *len += w,
                _ => out.push((s, w)),
            }
        }
        out
    }

    /// Every symbol repeated `weight` times, refusing beyond `max_len`.
    pub fn unweight(&self, max_len: u64) -> Result<Vec<Symbol>> {
        if self.total > max_len {
            return refused(format!(
                "expanded length {} exceeds the cap of {max_len}",
                self.total
            ));
        }
        let mut out = Vec::with_capacity(self.total as usize);
        for &s in &self.symbols {
            out.extend(std::iter::repeat_n(s, self.alphabet.weight(s) as usize));
        }
        Ok(out)
    }
}

/// Total length of `seq`.
pub fn total_length(seq: &WeightedSequence) -> u64 {
    seq.total_length()
}

/// `seq` with every symbol repeated according to its weight, under the default cap.
pub fn unweight(seq: &WeightedSequence) -> Result<Vec<Symbol>> {
    seq.unweight(DEFAULT_MAX_EXPAND)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(weights: &[u64]) -> Arc<WeightedAlphabet> {
        Arc::new(WeightedAlphabet::from_weights(weights.to_vec()).unwrap())
    }

    #[test]
    fn unweight_basics() {
        let unit = alphabet(&[1, 1]);
        let p = WeightedSequence::new(unit, vec![0, 1, 1]).unwrap();
        assert_eq!(unweight(&p).unwrap(), vec![0, 1, 1]);
        let heavy = WeightedSequence::new(alphabet(&[3]), vec![0]).unwrap();
        assert_eq!(unweight(&heavy).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn total_length_cases() {
        let a = alphabet(&[9, 2]);
        assert_eq!(total_length(&WeightedSequence::new(a.clone(), vec![]).unwrap()), 0);
        let p = WeightedSequence::new(a, vec![0]).unwrap();
        assert_eq!(total_length(&p), 9);
        assert_eq!(unweight(&p).unwrap().len() as u64, total_length(&p));
    }

    #[test]
    fn unweight_cap_refuses() {
        let p = WeightedSequence::new(alphabet(&[5]), vec![0, 0]).unwrap();
        assert!(matches!(p.unweight(9), Err(crate::Error::Refused(_))));
        assert_eq!(p.unweight(10).unwrap().len(), 10);
    }

    #[test]
    fn runs_merge_neighbours() {
        let p = WeightedSequence::new(alphabet(&[2, 1]), vec![0, 0, 1, 0]).unwrap();
        assert_eq!(p.runs(), vec![(0, 4), (1, 1), (0, 2)]);
    }

    #[test]
    fn builder_rejects_conflicting_weights() {
        let mut b = AlphabetBuilder::new();
        let f = b.intern("f", 9).unwrap();
        assert_eq!(b.intern("f", 9).unwrap(), f);
        assert!(b.intern("f", 8).is_err());
        assert!(b.intern("g", 0).is_err());
        assert_eq!(b.lookup("f"), Some(f));
    }

    #[test]
    fn rejects_foreign_symbols() {
        assert!(WeightedSequence::new(alphabet(&[1]), vec![1]).is_err());
        assert!(WeightedAlphabet::from_weights(vec![1, 0]).is_err());
    }

    #[test]
    fn overflow_is_refused() {
        let a = alphabet(&[u64::MAX]);
        assert!(matches!(WeightedSequence::new(a, vec![0, 0]), Err(crate::Error::Refused(_))));
    }
}
