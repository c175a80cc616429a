//! Certified-tuple aggregation and the final assembly: the minimum over
//! monotone chains of certified tuples of the estimated tuple costs plus the
//! per-string deletion charges between matched windows.

use super::large_windows::{approx_large_windows_ctx, LargeStats};
use super::matching::{find_unique_match_ctx, MatchSets};
use super::{min_insert, CostEstimation, PipelineCtx, PipelineParams, WindowTuple};
use crate::error::{Error, Result};
use crate::rat::{rat_usize, Rat};
use crate::seq::Sequence;
use num::Zero;

/// Runs both certification phases and min-merges their outputs.
pub fn multi_window_estimation(
    strings: &[Sequence],
    params: &PipelineParams,
) -> Result<(CostEstimation, MatchSets, LargeStats)> {
    let ctx = PipelineCtx::new(strings, params)?;
    let (s1, match_sets) = find_unique_match_ctx(&ctx)?;
    let (s2, stats) = approx_large_windows_ctx(&ctx, &match_sets)?;
    let mut merged = s1;
    for (tuple, cost) in s2 {
        min_insert(&mut merged, tuple, cost);
    }
    Ok((merged, match_sets, stats))
}

/// The assembly output: the estimated distance in per-string units and the
/// chosen monotone chain of tuples.
#[derive(Debug, Clone)]
pub struct AssemblyResult {
    pub value: Rat,
    pub chain: Vec<WindowTuple>,
}

/// Minimum over monotone chains of certified tuples of the sum of estimated
/// costs plus `1/m` per character deleted between matched windows. Unmatched
/// chains (delete everything) are always available, so the assembly is total.
pub fn assemble_distance(
    estimation: &CostEstimation,
    strings: &[Sequence],
) -> Result<AssemblyResult> {
    let m = strings.len();
    if m < 2 {
        return Err(Error::TooFewSequences { min: 2, got: m });
    }
    let lens: Vec<u32> = strings.iter().map(|s| s.len() as u32).collect();
    let m_rat = rat_usize(m);

    let mut tuples: Vec<(&WindowTuple, &Rat)> = Vec::with_capacity(estimation.len());
    for (t, c) in estimation {
        if t.0.len() != m {
            return Err(Error::InvalidInput(format!(
                "tuple arity {} does not match {} strings",
                t.0.len(),
                m
            )));
        }
        for (j, &(s, e)) in t.0.iter().enumerate() {
            if s == 0 || s > e || e > lens[j] {
                return Err(Error::IndexOutOfRange(format!(
                    "window ({s},{e}) in string {}",
                    j + 1
                )));
            }
        }
        tuples.push((t, c));
    }
    tuples.sort_by_key(|(t, _)| t.0[0].1);

    let start_charge = |t: &WindowTuple| -> Rat {
        let sum: usize = t.0.iter().map(|&(s, _)| (s - 1) as usize).sum();
        rat_usize(sum) / &m_rat
    };
    let end_sum = |t: &WindowTuple| -> usize { t.0.iter().map(|&(_, e)| e as usize).sum() };

    // best[i]: minimum cost covering all strings up to tuple i's windows,
    // matching tuple i last; g[i] subtracts the end positions so that the
    // inter-tuple deletion charge becomes separable.
    let mut best: Vec<Rat> = Vec::with_capacity(tuples.len());
    let mut g: Vec<Rat> = Vec::with_capacity(tuples.len());
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(tuples.len());
    for i in 0..tuples.len() {
        let (t_i, c_i) = tuples[i];
        let mut best_g = Rat::zero(); // virtual origin: all ends at 0
        let mut best_parent = None;
        for k in 0..i {
            let (t_k, _) = tuples[k];
            if g[k] >= best_g {
                continue;
            }
            let monotone = t_k
                .0
                .iter()
                .zip(&t_i.0)
                .all(|(&(_, e_k), &(s_i, _))| e_k < s_i);
            if monotone {
                best_g = g[k].clone();
                best_parent = Some(k);
            }
        }
        let b = c_i.clone() + start_charge(t_i) + &best_g;
        g.push(&b - rat_usize(end_sum(t_i)) / &m_rat);
        best.push(b);
        parent.push(best_parent);
    }

    // close the chain: delete every suffix character after the last tuple
    let total_len: usize = lens.iter().map(|&l| l as usize).sum();
    let mut value = rat_usize(total_len) / &m_rat; // empty chain
    let mut last: Option<usize> = None;
    for i in 0..tuples.len() {
        let suffix: usize = tuples[i]
            .0
             .0
            .iter()
            .zip(&lens)
            .map(|(&(_, e), &l)| (l - e) as usize)
            .sum();
        let candidate = &best[i] + rat_usize(suffix) / &m_rat;
        if candidate < value {
            value = candidate;
            last = Some(i);
        }
    }
    let mut chain = Vec::new();
    let mut cur = last;
    while let Some(i) = cur {
        chain.push(tuples[i].0.clone());
        cur = parent[i];
    }
    chain.reverse();
    Ok(AssemblyResult { value, chain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::seq::seqs;

    fn tuple(ws: &[(u32, u32)]) -> WindowTuple {
        WindowTuple(ws.to_vec())
    }

    #[test]
    fn single_full_cover_tuple() {
        let strings = seqs(&["abcd", "abcd"]);
        let mut s = CostEstimation::new();
        s.insert(tuple(&[(1, 4), (1, 4)]), rat(0, 1));
        let r = assemble_distance(&s, &strings).unwrap();
        assert_eq!(r.value, rat(0, 1));
        assert_eq!(r.chain.len(), 1);
    }

    #[test]
    fn two_half_tuples_add() {
        let strings = seqs(&["abcd", "abcd"]);
        let mut s = CostEstimation::new();
        s.insert(tuple(&[(1, 2), (1, 2)]), rat(1, 2));
        s.insert(tuple(&[(3, 4), (3, 4)]), rat(1, 3));
        let r = assemble_distance(&s, &strings).unwrap();
        assert_eq!(r.value, rat(1, 2) + rat(1, 3));
        assert_eq!(r.chain.len(), 2);
    }

    #[test]
    fn empty_estimation_deletes_everything() {
        let strings = seqs(&["abc", "abc"]);
        let s = CostEstimation::new();
        let r = assemble_distance(&s, &strings).unwrap();
        assert_eq!(r.value, rat(3, 1));
        assert!(r.chain.is_empty());
    }

    #[test]
    fn deletion_charges_between_windows() {
        // one tuple covering the middle: 2 chars deleted per string around it
        let strings = seqs(&["abcd", "abcd"]);
        let mut s = CostEstimation::new();
        s.insert(tuple(&[(2, 3), (2, 3)]), rat(0, 1));
        let r = assemble_distance(&s, &strings).unwrap();
        // (1+1)/2 before + (1+1)/2 after
        assert_eq!(r.value, rat(2, 1));
    }

    #[test]
    fn matches_brute_force_on_random_estimations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n: u32 = rng.gen_range(4..=9);
            let texts: Vec<String> = (0..2)
                .map(|_| {
                    (0..n)
                        .map(|_| char::from(b'a' + rng.gen_range(0..3u8)))
                        .collect()
                })
                .collect();
            let refs: Vec<&str> = texts.iter().map(|s| s.as_str()).collect();
            let strings = seqs(&refs);
            let mut s = CostEstimation::new();
            for _ in 0..rng.gen_range(1..=10) {
                let ws: Vec<(u32, u32)> = (0..2)
                    .map(|_| {
                        let a = rng.gen_range(1..=n);
                        let b = rng.gen_range(a..=n);
                        (a, b)
                    })
                    .collect();
                let cost = rat(rng.gen_range(0..=6), rng.gen_range(1..=3));
                min_insert(&mut s, WindowTuple(ws), cost);
            }
            let got = assemble_distance(&s, &strings).unwrap().value;

            // brute force over all monotone tuple subsets
            let items: Vec<(&WindowTuple, &Rat)> = s.iter().collect();
            let mut bestv = rat_usize(2 * n as usize) / rat_usize(2);
            let k = items.len();
            for mask in 0u32..1 << k {
                let chain: Vec<&WindowTuple> = (0..k)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| items[i].0)
                    .collect();
                let mut sorted = chain.clone();
                sorted.sort_by_key(|t| t.0[0].0);
                let mut ok = true;
                for w in sorted.windows(2) {
                    if !w[0]
                        .0
                        .iter()
                        .zip(&w[1].0)
                        .all(|(&(_, e), &(st, _))| e < st)
                    {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let mut cost = Rat::zero();
                let mut covered = 0usize;
                for t in &sorted {
                    cost += s.get(*t).unwrap();
                    covered += t.0.iter().map(|&(a, b)| (b - a + 1) as usize).sum::<usize>();
                }
                cost += rat_usize(2 * n as usize - covered) / rat_usize(2);
                if cost < bestv {
                    bestv = cost;
                }
            }
            assert_eq!(got, bestv);
        }
    }
}
