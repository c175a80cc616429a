//! Sequences over dense integer symbol ids. Text is interned to ids at the
//! boundary; every index exposed by the library is 1-based.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// An indexed string of symbol ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    id: u32,
    symbols: Vec<u32>,
}

impl Sequence {
    pub fn new(id: u32, symbols: Vec<u32>) -> Self {
        Sequence { id, symbols }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbol at 1-based index `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.symbols[i - 1]
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// Substring `[start, end]` (1-based, inclusive) as a symbol slice.
    pub fn range(&self, start: usize, end: usize) -> &[u32] {
        &self.symbols[start - 1..end]
    }

    /// The subsequence of symbols at the given sorted 1-based indices,
    /// together with a map from new 1-based positions to old 1-based indices.
    pub fn restricted(&self, indices: &[u32]) -> (Sequence, Vec<u32>) {
        let symbols = indices
            .iter()
            .map(|&i| self.symbols[i as usize - 1])
            .collect();
        (Sequence::new(self.id, symbols), indices.to_vec())
    }
}

/// Validates the common preconditions of the exact engines.
pub(crate) fn check_inputs(strings: &[Sequence]) -> Result<()> {
    if strings.len() < 2 {
        return Err(Error::TooFewSequences {
            min: 2,
            got: strings.len(),
        });
    }
    for s in strings {
        if s.is_empty() {
            return Err(Error::EmptySequence { id: s.id() });
        }
    }
    Ok(())
}

pub(crate) fn check_equal_lengths(strings: &[Sequence]) -> Result<usize> {
    let n = strings[0].len();
    for s in strings {
        if s.len() != n {
            return Err(Error::UnequalLengths(n, s.len()));
        }
    }
    Ok(n)
}

/// How text lines are mapped to symbol ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphabetMode {
    /// Every byte is a symbol id.
    Bytes,
    /// Whitespace-separated tokens are interned in order of first appearance.
    Tokens,
}

/// Interns text into symbol ids and renders ids back to text.
#[derive(Debug, Clone)]
pub struct Interner {
    mode: AlphabetMode,
    map: BTreeMap<String, u32>,
    rev: Vec<String>,
}

impl Interner {
    pub fn new(mode: AlphabetMode) -> Self {
        Interner {
            mode,
            map: BTreeMap::new(),
            rev: Vec::new(),
        }
    }

    pub fn mode(&self) -> AlphabetMode {
        self.mode
    }

    pub fn intern_line(&mut self, line: &str) -> Vec<u32> {
        match self.mode {
            AlphabetMode::Bytes => line.bytes().map(u32::from).collect(),
            AlphabetMode::Tokens => line
                .split_whitespace()
                .map(|tok| {
                    if let Some(&id) = self.map.get(tok) {
                        id
                    } else {
                        let id = self.rev.len() as u32;
                        self.map.insert(tok.to_string(), id);
                        self.rev.push(tok.to_string());
                        id
                    }
                })
                .collect(),
        }
    }

    pub fn render(&self, symbols: &[u32]) -> String {
        match self.mode {
            AlphabetMode::Bytes => symbols
                .iter()
                .map(|&s| char::from(u8::try_from(s).unwrap_or(b'?')))
                .collect(),
            AlphabetMode::Tokens => symbols
                .iter()
                .map(|&s| {
                    self.rev
                        .get(s as usize)
                        .cloned()
                        .unwrap_or_else(|| s.to_string())
                })
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Builds a sequence directly from ASCII text (bytes mode), for tests.
pub fn seq(id: u32, text: &str) -> Sequence {
    Sequence::new(id, text.bytes().map(u32::from).collect())
}

/// Builds the sequence list `["abc", "abd", ...]` with ids 1..=m, for tests.
pub fn seqs(texts: &[&str]) -> Vec<Sequence> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| seq(i as u32 + 1, t))
        .collect()
}
