//! LCS via minimal candidate frontiers.
//!
//! An l-candidate is an equal-symbol index tuple whose prefixes admit a
//! common subsequence of length l; a candidate is minimal when, among the
//! candidates sharing its first m-2 coordinates, no other candidate has both
//! of the last two coordinates at most as large. Within one frontier the
//! surviving candidates have strictly increasing (m-1)-th and strictly
//! decreasing m-th coordinates, so one pass per frontier suffices.

use crate::alignment::Alignment;
use crate::error::{Error, Result};
use crate::seq::{check_inputs, Sequence};
use std::collections::BTreeMap;

const MAX_DOM_CELLS: usize = 1 << 24;
const MAX_MATCH_TUPLES: usize = 1 << 22;

struct Dominance {
    dims: Vec<usize>,
    strides: Vec<usize>,
    cells: Vec<bool>,
}

impl Dominance {
    fn new(dims: Vec<usize>) -> Result<Self> {
        let mut total = 1usize;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= MAX_DOM_CELLS)
                .ok_or_else(|| Error::TooLarge("candidate dominance table".into()))?;
        }
        let m = dims.len();
        let mut strides = vec![1usize; m];
        for j in (0..m - 1).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        Ok(Dominance {
            dims,
            strides,
            cells: vec![false; total],
        })
    }

    /// Marks the points and closes under coordinate-wise increase, so that
    /// afterwards `covers(p)` answers "is some marked point <= p".
    fn build(&mut self, points: &[Vec<u32>]) {
        for c in self.cells.iter_mut() {
            *c = false;
        }
        for p in points {
            let idx: usize = p
                .iter()
                .zip(&self.strides)
                .map(|(&c, &s)| c as usize * s)
                .sum();
            self.cells[idx] = true;
        }
        let total = self.cells.len();
        for j in 0..self.dims.len() {
            let stride = self.strides[j];
            for idx in 0..total {
                let coord = idx / stride % self.dims[j];
                if coord > 0 && self.cells[idx - stride] {
                    self.cells[idx] = true;
                }
            }
        }
    }

    /// True iff some marked point is coordinate-wise strictly below `t`
    /// (all entries of `t` are >= 1).
    fn dominated(&self, t: &[u32]) -> bool {
        let idx: usize = t
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c as usize - 1) * s)
            .sum();
        self.cells[idx]
    }
}

fn match_tuples(strings: &[Sequence]) -> Result<Vec<Vec<u32>>> {
    let m = strings.len();
    let mut occ: Vec<BTreeMap<u32, Vec<u32>>> = vec![BTreeMap::new(); m];
    for (j, s) in strings.iter().enumerate() {
        for (i, &sym) in s.symbols().iter().enumerate() {
            occ[j].entry(sym).or_default().push(i as u32 + 1);
        }
    }
    let mut out = Vec::new();
    for (&sym, firsts) in occ[0].iter() {
        let lists: Option<Vec<&Vec<u32>>> = occ
            .iter()
            .skip(1)
            .map(|map| map.get(&sym))
            .collect::<Option<Vec<_>>>();
        let Some(rest) = lists else { continue };
        let mut count = firsts.len();
        for l in &rest {
            count = count.saturating_mul(l.len());
        }
        if out.len() + count > MAX_MATCH_TUPLES {
            return Err(Error::TooLarge("candidate match-tuple set".into()));
        }
        let mut tuple = vec![0u32; m];
        let mut stack = vec![0usize; m];
        // iterative product over occurrence lists, lexicographic
        let lists: Vec<&Vec<u32>> = std::iter::once(firsts).chain(rest).collect();
        let mut depth = 0usize;
        loop {
            if depth == m {
                out.push(tuple.clone());
                depth -= 1;
                stack[depth] += 1;
                continue;
            }
            if stack[depth] == lists[depth].len() {
                stack[depth] = 0;
                if depth == 0 {
                    break;
                }
                depth -= 1;
                stack[depth] += 1;
                continue;
            }
            tuple[depth] = lists[depth][stack[depth]];
            depth += 1;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Minimal candidates of one round, each with a parent index into the
/// previous round.
type CandidateRound = Vec<(Vec<u32>, usize)>;

fn run_candidates(strings: &[Sequence]) -> Result<(usize, Vec<CandidateRound>)> {
    let m = strings.len();
    let tuples = match_tuples(strings)?;
    let dims: Vec<usize> = strings.iter().map(|s| s.len() + 1).collect();
    let mut dom = Dominance::new(dims)?;

    // rounds[l] holds the minimal l-candidates with a parent pointer into
    // rounds[l-1]; round 0 is the virtual origin tuple.
    let mut rounds: Vec<CandidateRound> = vec![vec![(vec![0u32; m], usize::MAX)]];
    loop {
        let prev: Vec<Vec<u32>> = rounds.last().unwrap().iter().map(|(t, _)| t.clone()).collect();
        dom.build(&prev);
        let mut next: Vec<(Vec<u32>, usize)> = Vec::new();
        let mut group_prefix: &[u32] = &[];
        let mut high: u32 = u32::MAX; // frontier watermark on the last coordinate
        let mut have_group = false;
        for t in &tuples {
            let prefix = &t[..m - 2];
            if !have_group || prefix != group_prefix {
                have_group = true;
                group_prefix = prefix;
                high = u32::MAX;
            }
            if t[m - 1] >= high || !dom.dominated(t) {
                continue;
            }
            let parent = rounds
                .last()
                .unwrap()
                .iter()
                .position(|(p, _)| p.iter().zip(t).all(|(&a, &b)| a < b))
                .expect("dominated tuple has a dominating parent");
            next.push((t.clone(), parent));
            high = t[m - 1];
        }
        if next.is_empty() {
            break;
        }
        rounds.push(next);
    }
    Ok((rounds.len() - 1, rounds))
}

/// LCS length via the minimal-candidate engine. Agrees with [`super::lcs_len`]
/// on every input.
pub fn lcs_candidates(strings: &[Sequence]) -> Result<usize> {
    check_inputs(strings)?;
    Ok(run_candidates(strings)?.0)
}

/// Candidate engine variant that also reconstructs one witness alignment.
pub fn lcs_candidates_witness(strings: &[Sequence]) -> Result<(usize, Alignment)> {
    check_inputs(strings)?;
    let (len, rounds) = run_candidates(strings)?;
    let mut tuples_rev = Vec::with_capacity(len);
    if len > 0 {
        let mut level = len;
        let mut pos = 0usize; // lexicographically smallest final candidate
        while level > 0 {
            let (t, parent) = &rounds[level][pos];
            tuples_rev.push(t.clone());
            pos = *parent;
            level -= 1;
        }
    }
    tuples_rev.reverse();
    Ok((len, Alignment::new(tuples_rev)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::dp::lcs_len;
    use crate::seq::{seqs, Sequence};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identical_strings() {
        assert_eq!(lcs_candidates(&seqs(&["abcab", "abcab"])).unwrap(), 5);
    }

    #[test]
    fn small_triple() {
        assert_eq!(lcs_candidates(&seqs(&["ab", "ba", "ab"])).unwrap(), 1);
    }

    #[test]
    fn agrees_with_dp_on_random_triples() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..500 {
            let strings: Vec<Sequence> = (0..3)
                .map(|id| {
                    let n = rng.gen_range(1..=8);
                    Sequence::new(id, (0..n).map(|_| rng.gen_range(0..2u32)).collect())
                })
                .collect();
            assert_eq!(
                lcs_candidates(&strings).unwrap(),
                lcs_len(&strings).unwrap()
            );
        }
    }

    #[test]
    fn frontiers_are_anti_chains() {
        // within one frontier (fixed leading coordinates) the surviving
        // candidates have strictly increasing second-to-last and strictly
        // decreasing last coordinates
        let strings = seqs(&["abcabcab", "bcabcabc", "cabcabca"]);
        let (_, rounds) = run_candidates(&strings).unwrap();
        for round in rounds.iter().skip(1) {
            for pair in round.windows(2) {
                let (a, b) = (&pair[0].0, &pair[1].0);
                let m = a.len();
                if a[..m - 2] == b[..m - 2] {
                    assert!(a[m - 2] < b[m - 2]);
                    assert!(a[m - 1] > b[m - 1]);
                }
            }
        }
    }

    #[test]
    fn witness_is_valid() {
        let strings = seqs(&["abacb", "bcaba", "ababa"]);
        let (len, w) = lcs_candidates_witness(&strings).unwrap();
        assert_eq!(len, lcs_len(&strings).unwrap());
        assert_eq!(w.len(), len);
        w.validate(&strings).unwrap();
    }
}
