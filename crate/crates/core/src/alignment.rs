//! Common alignments: strictly monotone chains of equal-symbol index tuples.

use crate::error::{Error, Result};
use crate::seq::Sequence;

/// A common alignment of `m` sequences: an ordered list of m-vectors of
/// 1-based indices, strictly increasing in every coordinate, with equal
/// symbols inside each tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    tuples: Vec<Vec<u32>>,
}

impl Alignment {
    pub fn new(tuples: Vec<Vec<u32>>) -> Self {
        Alignment { tuples }
    }

    pub fn empty() -> Self {
        Alignment { tuples: Vec::new() }
    }

    /// Number of aligned tuples, i.e. the length of the common subsequence.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<u32>] {
        &self.tuples
    }

    /// Sorted 1-based indices of string `j` (0-based position in the input
    /// list) that are aligned.
    pub fn aligned_indices(&self, j: usize) -> Vec<u32> {
        self.tuples.iter().map(|t| t[j]).collect()
    }

    /// Sorted 1-based indices of string `j` left unaligned, given its length.
    pub fn unaligned_indices(&self, j: usize, n: usize) -> Vec<u32> {
        let mut aligned = vec![false; n + 1];
        for t in &self.tuples {
            aligned[t[j] as usize] = true;
        }
        (1..=n as u32).filter(|&i| !aligned[i as usize]).collect()
    }

    /// The aligned symbols, read off the first string.
    pub fn symbols(&self, s1: &Sequence) -> Vec<u32> {
        self.tuples
            .iter()
            .map(|t| s1.at(t[0] as usize))
            .collect()
    }

    /// Checks the type invariants against the sequences the alignment refers
    /// to: coordinate count, index ranges, strict monotonicity and symbol
    /// equality per tuple.
    pub fn validate(&self, strings: &[Sequence]) -> Result<()> {
        let m = strings.len();
        let mut prev: Option<&Vec<u32>> = None;
        for t in &self.tuples {
            if t.len() != m {
                return Err(Error::InvalidInput(format!(
                    "tuple arity {} does not match {} strings",
                    t.len(),
                    m
                )));
            }
            let sym = strings[0].at(t[0] as usize);
            for (j, &i) in t.iter().enumerate() {
                if i == 0 || i as usize > strings[j].len() {
                    return Err(Error::IndexOutOfRange(format!(
                        "index {} in string {}",
                        i,
                        j + 1
                    )));
                }
                if strings[j].at(i as usize) != sym {
                    return Err(Error::InvalidInput(
                        "aligned symbols differ within a tuple".into(),
                    ));
                }
                if let Some(p) = prev {
                    if i <= p[j] {
                        return Err(Error::InvalidInput(
                            "alignment tuples are not strictly monotone".into(),
                        ));
                    }
                }
            }
            prev = Some(t);
        }
        Ok(())
    }
}

/// Greedily embeds a symbol sequence as a common alignment of `strings`,
/// taking the leftmost occurrence in every string. Returns `None` if the
/// symbols are not a common subsequence.
pub fn embed(symbols: &[u32], strings: &[Sequence]) -> Option<Alignment> {
    let m = strings.len();
    let mut cursors = vec![0usize; m]; // 0-based scan position per string
    let mut tuples = Vec::with_capacity(symbols.len());
    for &sym in symbols {
        let mut tuple = Vec::with_capacity(m);
        for (j, s) in strings.iter().enumerate() {
            let mut pos = cursors[j];
            while pos < s.len() && s.symbols()[pos] != sym {
                pos += 1;
            }
            if pos == s.len() {
                return None;
            }
            cursors[j] = pos + 1;
            tuple.push(pos as u32 + 1);
        }
        tuples.push(tuple);
    }
    Some(Alignment::new(tuples))
}

/// Embeds the subsequence of `s1` at the given sorted 1-based indices into
/// all strings; the first coordinate of each tuple is the given index itself.
pub fn embed_from_s1_indices(indices: &[u32], strings: &[Sequence]) -> Option<Alignment> {
    let m = strings.len();
    let mut cursors = vec![0usize; m - 1];
    let mut tuples = Vec::with_capacity(indices.len());
    for &i1 in indices {
        let sym = strings[0].at(i1 as usize);
        let mut tuple = vec![i1];
        for (jj, s) in strings.iter().enumerate().skip(1) {
            let j = jj - 1;
            let mut pos = cursors[j];
            while pos < s.len() && s.symbols()[pos] != sym {
                pos += 1;
            }
            if pos == s.len() {
                return None;
            }
            cursors[j] = pos + 1;
            tuple.push(pos as u32 + 1);
        }
        tuples.push(tuple);
    }
    Some(Alignment::new(tuples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::seqs;

    #[test]
    fn embed_validates() {
        let strings = seqs(&["abcd", "badc", "acbd"]);
        let a = embed(&[b'a' as u32, b'd' as u32], &strings).unwrap();
        assert_eq!(a.len(), 2);
        a.validate(&strings).unwrap();
        assert!(embed(&[b'd' as u32, b'a' as u32], &strings).is_none());
    }

    #[test]
    fn unaligned_partition() {
        let strings = seqs(&["abc", "abc"]);
        let a = embed(&[b'a' as u32, b'c' as u32], &strings).unwrap();
        assert_eq!(a.unaligned_indices(0, 3), vec![2]);
        assert_eq!(a.aligned_indices(0), vec![1, 3]);
    }
}
