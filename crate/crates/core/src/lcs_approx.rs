//! Multi-sequence LCS approximation: enumerate pairwise-disjoint common
//! subsequences of the first group until they cover the first string densely
//! enough, intersect each with the second group by an ordinary LCS call, and
//! drive the resulting gap decider with a geometric sweep.

use crate::alignment::{embed_from_s1_indices, Alignment};
use crate::error::{Error, Result};
use crate::exact::candidates::lcs_candidates_witness;
use crate::rat::{rat, rat_usize, Rat};
use crate::seq::{check_equal_lengths, check_inputs, Sequence};
use num::One;

/// One cover member: a common subsequence of the first group, carried as the
/// sorted 1-based indices it uses in the first string.
#[derive(Debug, Clone)]
pub struct LcsMember {
    pub s1_indices: Vec<u32>,
    pub symbols: Vec<u32>,
}

/// Pairwise-disjoint (on the first string) common subsequences of one group.
#[derive(Debug, Clone)]
pub struct LcsCover {
    pub members: Vec<LcsMember>,
}

/// LCS of a group that may contain a single sequence, with a witness
/// expressed as 1-based indices of the group's first sequence.
fn group_lcs(group: &[Sequence]) -> Result<(usize, Vec<u32>)> {
    if group.len() == 1 {
        return Ok((group[0].len(), (1..=group[0].len() as u32).collect()));
    }
    if group.iter().any(|s| s.is_empty()) {
        return Ok((0, Vec::new()));
    }
    let (len, witness) = lcs_candidates_witness(group)?;
    Ok((len, witness.aligned_indices(0)))
}

/// Iterated disjoint-LCS enumeration. Requires `L(group) >= lambda * n` where
/// `n` is the length of the group's first sequence.
///
/// Members are admitted while their length stays at least
/// `lambda*n - lambda^2*n*(k-1)/2`; the first shorter one stops the loop and
/// is not admitted.
pub fn enumerate_lcs(group: &[Sequence], lambda: &Rat) -> Result<LcsCover> {
    if group.is_empty() {
        return Err(Error::TooFewSequences { min: 1, got: 0 });
    }
    let n = group[0].len();
    let lambda_n = lambda * rat_usize(n);
    let (first_len, _) = group_lcs(group)?;
    if rat_usize(first_len) < lambda_n {
        return Err(Error::Precondition(format!(
            "group LCS {first_len} is below lambda * n"
        )));
    }
    let cap = crate::rat::ceil_usize(&(rat_usize(2) / lambda)).max(1);
    let mut members: Vec<LcsMember> = Vec::new();
    let mut used = vec![false; n + 1];
    loop {
        let free: Vec<u32> = (1..=n as u32).filter(|&i| !used[i as usize]).collect();
        let (restricted, index_map) = group[0].restricted(&free);
        let mut sub_group = vec![restricted];
        sub_group.extend_from_slice(&group[1..]);
        let (len, local_indices) = group_lcs(&sub_group)?;
        let k = members.len() + 1;
        let threshold = &lambda_n - lambda * lambda * rat_usize(n) * rat_usize(k - 1) / rat_usize(2);
        if rat_usize(len) < threshold {
            break;
        }
        let s1_indices: Vec<u32> = local_indices
            .iter()
            .map(|&p| index_map[p as usize - 1])
            .collect();
        let symbols = s1_indices
            .iter()
            .map(|&i| group[0].at(i as usize))
            .collect();
        for &i in &s1_indices {
            used[i as usize] = true;
        }
        members.push(LcsMember {
            s1_indices,
            symbols,
        });
        if members.len() >= cap {
            break;
        }
    }
    Ok(LcsCover { members })
}

/// Gap decider for the LCS: splits into `G_1 = s_1..s_ceil(m/2)` and
/// `G_2 = rest`; accepts iff some cover member has an LCS with `G_2` of
/// length at least `lambda^2 * n / 2`. Guaranteed to accept when
/// `L >= lambda * n` and to reject when `L < lambda^2 * n / 2`.
pub fn gap_multi_lcs(strings: &[Sequence], lambda: &Rat) -> Result<(bool, Option<Alignment>)> {
    check_inputs(strings)?;
    let n = check_equal_lengths(strings)?;
    if lambda <= &rat(0, 1) || lambda > &rat(1, 1) {
        return Err(Error::ParamOutOfRange(format!(
            "lambda must lie in (0, 1], got {lambda}"
        )));
    }
    let m = strings.len();
    let half = m.div_ceil(2);
    let g1 = &strings[..half];
    let g2 = &strings[half..];
    let lambda_n = lambda * rat_usize(n);
    let (g1_len, _) = group_lcs(g1)?;
    if rat_usize(g1_len) < lambda_n {
        return Ok((false, None));
    }
    let cover = enumerate_lcs(g1, lambda)?;
    let accept = lambda * lambda * rat_usize(n) / rat_usize(2);
    for member in &cover.members {
        if member.s1_indices.is_empty() {
            continue;
        }
        let as_seq = Sequence::new(0, member.symbols.clone());
        let mut probe = vec![as_seq];
        probe.extend_from_slice(g2);
        let (len, local) = group_lcs(&probe)?;
        if rat_usize(len) >= accept {
            let s1_indices: Vec<u32> = local
                .iter()
                .map(|&p| member.s1_indices[p as usize - 1])
                .collect();
            let witness = embed_from_s1_indices(&s1_indices, strings).ok_or_else(|| {
                Error::InvalidInput("gap witness failed to embed".into())
            })?;
            return Ok((true, Some(witness)));
        }
    }
    Ok((false, None))
}

/// Geometric sweep from `lambda = 1` downward; returns the witness of the
/// first accepting level (the empty alignment when the LCS is 0). The result
/// has length at least `lambda^2 * n / (2 + eps)` where `L = lambda * n`.
pub fn multi_lcs_approx(strings: &[Sequence], epsilon: &Rat) -> Result<Alignment> {
    if epsilon <= &rat(0, 1) {
        return Err(Error::ParamOutOfRange("epsilon must be positive".into()));
    }
    check_inputs(strings)?;
    let n = check_equal_lengths(strings)?;
    // eps/5 keeps 2*(1+eps')^2 <= 2+eps on the whole grid
    let eps_prime = epsilon / rat_usize(5);
    let ratio = Rat::one() + eps_prime;
    let mut lambda = Rat::one();
    while lambda.clone() * rat_usize(n) >= Rat::one() {
        let (accepted, witness) = gap_multi_lcs(strings, &lambda)?;
        if accepted {
            return Ok(witness.expect("accepting probe carries a witness"));
        }
        lambda /= &ratio;
    }
    Ok(Alignment::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::dp::lcs_len;
    use crate::seq::seqs;

    #[test]
    fn identical_group_single_member() {
        let group = seqs(&["abcd", "abcd"]);
        let cover = enumerate_lcs(&group, &rat(1, 2)).unwrap();
        assert_eq!(cover.members.len(), 1);
        assert_eq!(cover.members[0].s1_indices, vec![1, 2, 3, 4]);
    }

    #[test]
    fn members_are_disjoint() {
        let group = seqs(&["abab", "baba"]);
        let cover = enumerate_lcs(&group, &rat(1, 2)).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for mbr in &cover.members {
            for &i in &mbr.s1_indices {
                assert!(seen.insert(i), "members overlap on s1");
            }
        }
        assert!(!cover.members.is_empty());
    }

    #[test]
    fn precondition_is_reported() {
        let group = seqs(&["aaaa", "bbbb"]);
        assert!(enumerate_lcs(&group, &rat(1, 2)).is_err());
    }

    #[test]
    fn gap_identical_accepts_full() {
        let strings = seqs(&["abc", "abc"]);
        let (bit, w) = gap_multi_lcs(&strings, &rat(1, 1)).unwrap();
        assert!(bit);
        assert_eq!(w.unwrap().len(), 3);
    }

    #[test]
    fn gap_disjoint_rejects() {
        let strings = seqs(&["aaaa", "bbbb"]);
        let (bit, w) = gap_multi_lcs(&strings, &rat(1, 2)).unwrap();
        assert!(!bit);
        assert!(w.is_none());
    }

    #[test]
    fn approx_identical() {
        let strings = seqs(&["abcab", "abcab", "abcab"]);
        let w = multi_lcs_approx(&strings, &rat(1, 10)).unwrap();
        assert_eq!(w.len(), 5);
        w.validate(&strings).unwrap();
    }

    #[test]
    fn approx_disjoint_is_empty() {
        let strings = seqs(&["aaa", "bbb"]);
        let w = multi_lcs_approx(&strings, &rat(1, 10)).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn approx_floor_holds() {
        let strings = seqs(&["abcabcab", "bcabacba", "cabcababi"]);
        // unequal lengths rejected
        assert!(multi_lcs_approx(&strings, &rat(1, 10)).is_err());
        let strings = seqs(&["abcabcab", "bcabacba", "cabcabab"]);
        let n = 8;
        let l = lcs_len(&strings).unwrap();
        assert!(l >= 1);
        let w = multi_lcs_approx(&strings, &rat(1, 10)).unwrap();
        w.validate(&strings).unwrap();
        // |witness| >= lambda^2 n / 2.1 with lambda = l / n
        let floor = rat_usize(l * l) / rat_usize(n) / rat(21, 10);
        assert!(rat_usize(w.len()) >= floor);
    }
}
